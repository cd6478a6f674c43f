#pragma once

// Synthetic designs (linear, logistic, treatment-rule) with standard Gaussian
// covariates, Monte-Carlo truths for Err_m, and a coverage-study runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvboot/core.hpp"
#include "cvboot/engine.hpp"
#include "cvboot/learners.hpp"
#include "cvboot/metrics.hpp"
#include "cvboot/rng.hpp"

namespace cvboot {

enum class GeneratorKind { linear_lowdim, linear_highdim, logistic_lowdim, logistic_highdim, itr_lowdim, itr_highdim };

inline std::string_view to_string(GeneratorKind k)
{
    switch (k) {
    case GeneratorKind::linear_lowdim: return "linear_lowdim";
    case GeneratorKind::linear_highdim: return "linear_highdim";
    case GeneratorKind::logistic_lowdim: return "logistic_lowdim";
    case GeneratorKind::logistic_highdim: return "logistic_highdim";
    case GeneratorKind::itr_lowdim: return "itr_lowdim";
    case GeneratorKind::itr_highdim: return "itr_highdim";
    }
    return "?";
}

inline GeneratorKind parse_generator_kind(std::string_view s)
{
    for (auto k : {GeneratorKind::linear_lowdim, GeneratorKind::linear_highdim, GeneratorKind::logistic_lowdim,
                   GeneratorKind::logistic_highdim, GeneratorKind::itr_lowdim, GeneratorKind::itr_highdim})
        if (to_string(k) == s)
            return k;
    fail(ErrorCode::InvalidArgument, "unknown generator '", std::string(s), "'");
}

enum class Design { linear, logistic, itr };

inline Design design_of(GeneratorKind k)
{
    switch (k) {
    case GeneratorKind::linear_lowdim:
    case GeneratorKind::linear_highdim: return Design::linear;
    case GeneratorKind::logistic_lowdim:
    case GeneratorKind::logistic_highdim: return Design::logistic;
    default: return Design::itr;
    }
}

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::linear_lowdim;
    Index n = 0; // 0: design default (90, or 180 for itr)
    Index p = 0; // 0: design default (10 low-dimensional, 1000 high-dimensional)

    Index sample_size() const
    {
        if (n)
            return n;
        return design_of(kind) == Design::itr ? 180 : 90;
    }

    Index dim() const
    {
        if (p)
            return p;
        switch (kind) {
        case GeneratorKind::linear_highdim:
        case GeneratorKind::logistic_highdim:
        case GeneratorKind::itr_highdim: return 1000;
        default: return 10;
        }
    }
};

/// True coefficient vectors over (1, z), length p + 1.
inline Eigen::VectorXd linear_beta(Index p)
{
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + 1));
    for (Eigen::Index j = 1; j <= std::min<Eigen::Index>(4, static_cast<Eigen::Index>(p)); ++j)
        b[j] = 1.0;
    return b;
}

inline Eigen::VectorXd logistic_beta(Index p) { return 1.16 * linear_beta(p); }

inline Eigen::VectorXd itr_beta_treated(Index p) { return 0.25 * linear_beta(p); }

inline Eigen::VectorXd itr_beta_control(Index p)
{
    Eigen::VectorXd b = itr_beta_treated(p);
    for (Eigen::Index j = 2; j < b.size() && j <= 4; j += 2)
        b[j] = -0.25;
    return b;
}

/// Conditional treatment effect coefficients (treated minus control).
inline Eigen::VectorXd itr_effect(Index p) { return itr_beta_treated(p) - itr_beta_control(p); }

namespace detail {

inline double dot_tilde(const Eigen::VectorXd& beta, const Eigen::Ref<const Eigen::RowVectorXd>& z)
{
    return beta[0] + z.dot(beta.tail(beta.size() - 1));
}

} // namespace detail

/// Draws one dataset of `rows` rows (defaults to spec.sample_size()).
inline Dataset generate(const GeneratorSpec& spec, Rng& rng, std::optional<Index> rows = std::nullopt)
{
    const Index n = rows.value_or(spec.sample_size());
    const Index p = spec.dim();
    if (n < 2 || p < 1)
        fail(ErrorCode::InvalidArgument, "generator needs n >= 2 and p >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    Dataset d;
    d.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < d.features.rows(); ++i)
        for (Eigen::Index j = 0; j < d.features.cols(); ++j)
            d.features(i, j) = normal(rng);
    d.outcome.resize(static_cast<Eigen::Index>(n));
    switch (design_of(spec.kind)) {
    case Design::linear: {
        const auto beta = linear_beta(p);
        for (Eigen::Index i = 0; i < d.outcome.size(); ++i)
            d.outcome[i] = detail::dot_tilde(beta, d.features.row(i)) + normal(rng);
        break;
    }
    case Design::logistic: {
        const auto beta = logistic_beta(p);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (Eigen::Index i = 0; i < d.outcome.size(); ++i)
            d.outcome[i] = unif(rng) < detail::expit(detail::dot_tilde(beta, d.features.row(i))) ? 1.0 : 0.0;
        d.kind = OutcomeKind::binary;
        break;
    }
    case Design::itr: {
        const auto b1 = itr_beta_treated(p);
        const auto b0 = itr_beta_control(p);
        std::vector<double> g(n, 0.0);
        std::fill(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n / 2), 1.0);
        std::shuffle(g.begin(), g.end(), rng);
        d.treatment = Eigen::VectorXd(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < d.outcome.size(); ++i) {
            const double y1 = detail::dot_tilde(b1, d.features.row(i)) + normal(rng);
            const double y0 = detail::dot_tilde(b0, d.features.row(i)) + normal(rng);
            (*d.treatment)[i] = g[static_cast<Index>(i)];
            d.outcome[i] = g[static_cast<Index>(i)] == 1.0 ? y1 : y0;
        }
        break;
    }
    }
    return validate(std::move(d));
}

inline double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// E|X| for X ~ N(mu, sigma^2).
inline double folded_normal_mean(double mu, double sigma)
{
    if (!(sigma > 0))
        return std::abs(mu);
    return sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * mu * mu / (sigma * sigma)) +
           mu * (1.0 - 2.0 * std_normal_cdf(-mu / sigma));
}

/// Population mean absolute error of a linear predictor under the linear
/// design: the residual is N(alpha0 - alpha, 1 + |beta - beta0|^2).
inline double linear_population_mape(const Eigen::VectorXd& coef, Index p)
{
    const Eigen::VectorXd diff = linear_beta(p) - coef;
    return folded_normal_mean(diff[0], std::sqrt(1.0 + diff.tail(diff.size() - 1).squaredNorm()));
}

/// Population treatment effect among rows the score coef'(1,z) marks positive
/// under the treatment-rule design. NaN when the subgroup is empty.
inline double itr_population_subgroup_effect(const Eigen::VectorXd& coef, Index p, bool positive = true)
{
    const Eigen::VectorXd delta = itr_effect(p);
    const Eigen::VectorXd b = coef.tail(coef.size() - 1);
    const double norm = b.norm();
    const double sign = positive ? 1.0 : -1.0;
    if (!(norm > 0)) {
        const bool all = positive ? coef[0] > 0 : coef[0] <= 0;
        return all ? delta[0] : std::numeric_limits<double>::quiet_NaN();
    }
    // u = b'z/|b| is standard normal; E[delta'z | u] = (delta'b/|b|) u.
    const double slope = delta.tail(delta.size() - 1).dot(b) / norm;
    const double a = -coef[0] / norm;
    const double tail = positive ? std_normal_cdf(-a) : std_normal_cdf(a);
    if (!(tail > 0))
        return std::numeric_limits<double>::quiet_NaN();
    return delta[0] + sign * slope * std_normal_pdf(a) / tail;
}

/// Closed-form population value of a fitted model where the design admits one
/// (MAPE under the linear design, subgroup effects under the ITR design).
inline std::optional<double> population_value(const GeneratorSpec& spec, const FittedModel& model,
                                              const MetricEvaluator& eval)
{
    const Design d = design_of(spec.kind);
    if (d == Design::linear && eval.metric == Metric::mape)
        return linear_population_mape(model.coef, spec.dim());
    if (d == Design::itr && eval.cutoff_rule == CutoffRule::fixed && eval.cutoff == 0.0 &&
        (eval.metric == Metric::ate_positive || eval.metric == Metric::ate_nonpositive))
        return itr_population_subgroup_effect(model.coef, spec.dim(), eval.metric == Metric::ate_positive);
    return std::nullopt;
}

struct TruthConfig {
    Index train_reps = 2000;
    Index n_test = 50000; // only used when no closed form exists
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Monte-Carlo Err_m: mean over train_reps independent size-m training sets
/// of the trained model's population performance (closed form when
/// available, otherwise measured on one shared test set of n_test rows).
template <Learner L, Evaluator E>
double true_err_m(const GeneratorSpec& spec, const L& learner, const E& evaluator, Index m, const TruthConfig& tc)
{
    if (m < 2 || tc.train_reps < 1)
        fail(ErrorCode::InvalidArgument, "true_err_m needs m >= 2 and train_reps >= 1");
    std::optional<Dataset> test;
    std::optional<WeightedView> test_view;
    auto closed_form = [&](const auto& model) -> std::optional<double> {
        if constexpr (std::is_same_v<typename L::model_type, FittedModel> && std::is_same_v<E, MetricEvaluator>)
            return population_value(spec, model, evaluator);
        else
            return std::nullopt;
    };
    std::vector<double> values(tc.train_reps, 0.0);
    std::vector<char> ok(tc.train_reps, 0);
    Index first = 0;
    // The first model decides whether a test set is needed.
    {
        Rng rng = make_rng(tc.seed, {stream::simulation, 0, 0});
        const Dataset train = generate(spec, rng, m);
        const auto model = learner.fit(WeightedView::all(train));
        if (auto v = closed_form(model)) {
            values[0] = *v;
            ok[0] = std::isfinite(*v);
            first = 1;
        } else {
            Rng test_rng = make_rng(tc.seed, {stream::simulation, 1});
            test = generate(spec, test_rng, tc.n_test);
            test_view = WeightedView::all(*test);
        }
    }
    detail::parallel_for(tc.train_reps - first, tc.threads, [&](Index j) {
        const Index r = j + first;
        Rng rng = make_rng(tc.seed, {stream::simulation, 0, r});
        const Dataset train = generate(spec, rng, m);
        try {
            const auto model = learner.fit(WeightedView::all(train));
            double v;
            if (test_view)
                v = evaluator(*test_view, detail::score_rows(learner, model, *test_view));
            else
                v = *closed_form(model);
            values[r] = v;
            ok[r] = std::isfinite(v);
        } catch (const Error& e) {
            if (!e.fold_local())
                throw;
        }
    });
    double sum = 0;
    Index count = 0;
    for (Index r = 0; r < tc.train_reps; ++r)
        if (ok[r]) {
            sum += values[r];
            ++count;
        }
    if (count == 0)
        fail(ErrorCode::DegenerateFold, "no training replicate produced a finite value");
    return sum / static_cast<double>(count);
}

/// A proportion with its Monte-Carlo standard error sqrt(p(1-p)/n).
struct Rate {
    double value = 0;
    double mc_se = 0;
    Index count = 0;
};

inline Rate make_rate(Index hits, Index total)
{
    Rate r;
    r.count = total;
    if (total == 0)
        return r;
    r.value = static_cast<double>(hits) / static_cast<double>(total);
    r.mc_se = std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(total));
    return r;
}

struct CoverageRow {
    Index m = 0;
    double truth = 0; // Err_m
    Index sims = 0;   // completed simulations
    Index failed = 0; // simulations whose inference raised
    double mean = 0;  // of the point estimates
    double bias = 0;
    double sd = 0;
    double mean_se = 0;
    double mean_se_adj = 0;
    double median_width = 0;     // normal interval
    double median_width_cal = 0; // calibrated interval, when calibrating
    Rate coverage;
    Rate coverage_adj;
    std::optional<Rate> coverage_cal;
    std::optional<Rate> coverage_cal_adj;
    std::optional<Rate> coverage_dn_adj; // adjusted interval against Err(D_n)
    std::vector<double> points;          // per-simulation point estimates
};

struct CoverageConfig {
    Index n_sims = 200;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool per_dataset_truth = true; // also score intervals against Err(D_n) where a closed form exists
};

namespace detail {

inline double median(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2)
        return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

} // namespace detail

/// For each m: n_sims datasets, fast_bootstrap on each, and the empirical
/// behaviour of the point estimate and intervals against truths[m].
template <Learner L, Evaluator E>
std::vector<CoverageRow> coverage_experiment(const GeneratorSpec& spec, const L& learner, const E& evaluator,
                                             const std::vector<Index>& m_grid, const std::vector<double>& truths,
                                             const RunConfig& base, const CoverageConfig& cc)
{
    if (truths.size() != m_grid.size())
        fail(ErrorCode::DimensionMismatch, "need one truth per training size");
    std::vector<CoverageRow> rows;
    for (Index mi = 0; mi < m_grid.size(); ++mi) {
        struct Sim {
            bool ok = false;
            InferenceReport report;
            std::optional<double> dn_truth;
        };
        std::vector<Sim> sims(cc.n_sims);
        detail::parallel_for(cc.n_sims, cc.threads, [&](Index s) {
            Rng rng = make_rng(cc.seed, {stream::simulation, 2, s});
            const Dataset data = generate(spec, rng);
            RunConfig cfg = base;
            cfg.m = m_grid[mi];
            cfg.seed = derive_seed(cc.seed, {stream::simulation, 3, s, m_grid[mi]});
            cfg.threads = 1;
            try {
                sims[s].report = fast_bootstrap(data, learner, evaluator, cfg).report;
                sims[s].ok = true;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::InvalidArgument)
                    throw;
                return;
            }
            if constexpr (std::is_same_v<typename L::model_type, FittedModel> && std::is_same_v<E, MetricEvaluator>) {
                if (cc.per_dataset_truth) {
                    try {
                        sims[s].dn_truth = population_value(spec, learner.fit(WeightedView::all(data)), evaluator);
                    } catch (const Error&) {
                    }
                }
            }
        });

        CoverageRow row;
        row.m = m_grid[mi];
        row.truth = truths[mi];
        Index hit = 0, hit_adj = 0, hit_cal = 0, hit_cal_adj = 0, hit_dn = 0, dn_total = 0;
        std::vector<double> widths, widths_cal;
        for (const auto& s : sims) {
            if (!s.ok) {
                ++row.failed;
                continue;
            }
            const auto& r = s.report;
            ++row.sims;
            row.points.push_back(r.point);
            row.mean_se += r.se;
            row.mean_se_adj += r.se_adj;
            hit += r.ci_normal.contains(row.truth);
            hit_adj += r.ci_adj.contains(row.truth);
            widths.push_back(r.ci_normal.width());
            if (r.ci_calibrated) {
                hit_cal += r.ci_calibrated->contains(row.truth);
                hit_cal_adj += r.ci_calibrated_adj->contains(row.truth);
                widths_cal.push_back(r.ci_calibrated->width());
            }
            if (s.dn_truth && std::isfinite(*s.dn_truth)) {
                ++dn_total;
                hit_dn += r.ci_adj.contains(*s.dn_truth);
            }
        }
        if (row.sims > 0) {
            const double k = static_cast<double>(row.sims);
            for (double v : row.points)
                row.mean += v;
            row.mean /= k;
            for (double v : row.points)
                row.sd += (v - row.mean) * (v - row.mean);
            row.sd = row.sims > 1 ? std::sqrt(row.sd / (k - 1.0)) : 0.0;
            row.bias = row.mean - row.truth;
            row.mean_se /= k;
            row.mean_se_adj /= k;
        }
        row.coverage = make_rate(hit, row.sims);
        row.coverage_adj = make_rate(hit_adj, row.sims);
        row.median_width = detail::median(widths);
        if (base.calibrate) {
            row.coverage_cal = make_rate(hit_cal, row.sims);
            row.coverage_cal_adj = make_rate(hit_cal_adj, row.sims);
            row.median_width_cal = detail::median(widths_cal);
        }
        if (dn_total > 0)
            row.coverage_dn_adj = make_rate(hit_dn, dn_total);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace cvboot
