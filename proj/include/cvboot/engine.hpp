#pragma once

// Inference drivers: repeated-split cross-validation for the point estimate,
// the weighted bootstrap grid that yields its standard error, optional
// critical-value calibration, the naive resampling oracle, budget pilots,
// paired model comparison and K-fold pre-validated ROC curves.
//
// Every random draw comes from a stream addressed by (seed, tag, indices), so
// results do not depend on thread count or scheduling.

#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "cvboot/core.hpp"
#include "cvboot/learners.hpp"
#include "cvboot/metrics.hpp"
#include "cvboot/resampling.hpp"
#include "cvboot/rng.hpp"
#include "cvboot/variance.hpp"

namespace cvboot {

template <class L>
concept Learner = requires(const L& learner, const WeightedView& view, const Dataset& data) {
    typename L::model_type;
    { learner.fit(view) } -> std::convertible_to<typename L::model_type>;
    { learner.score(std::declval<const typename L::model_type&>(), data.z(0)) } -> std::convertible_to<double>;
};

template <class E>
concept Evaluator = requires(const E& eval, const WeightedView& view, std::span<const double> scores) {
    { eval(view, scores) } -> std::convertible_to<double>;
};

struct RunConfig {
    Index m = 0;              // training size of the point estimate
    Index b_cv_point = 400;   // splits averaged for the point estimate
    Index b_boot = 200;       // bootstraps
    Index b_cv = 20;          // splits per bootstrap
    double alpha = 0.05;
    std::uint64_t seed = 0;
    bool calibrate = false;
    Index l_reps = 1000;      // calibration replicates
    bool stratify = false;    // keep outcome classes in both folds (binary outcomes)
    int max_redraws = 100;    // per split, for fold-local failures
    double size_penalty = kDefaultSizePenalty;
    double max_missing_fraction = 0.2;
    unsigned threads = 1;     // 0: one per hardware thread

    void check(Index n) const
    {
        if (m < 1 || m + 1 > n)
            fail(ErrorCode::InvalidArgument, "m=", m, " must be in [1, n-1] with n=", n);
        if (b_cv_point < 1)
            fail(ErrorCode::InvalidArgument, "b_cv_point must be >= 1");
        if (b_boot < 2 || b_cv < 2)
            fail(ErrorCode::InsufficientReplication, "b_boot and b_cv must be >= 2");
        if (!(alpha > 0 && alpha < 1))
            fail(ErrorCode::InvalidArgument, "alpha must be in (0,1)");
        if (calibrate && l_reps < 1)
            fail(ErrorCode::InvalidArgument, "l_reps must be >= 1");
        if (max_redraws < 0)
            fail(ErrorCode::InvalidArgument, "max_redraws must be >= 0");
    }
};

namespace detail {

inline unsigned resolve_threads(unsigned requested, Index tasks)
{
    unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<Index>(t, std::max<Index>(tasks, 1)));
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers stop.
template <class Fn>
void parallel_for(Index count, unsigned threads, Fn&& fn)
{
    threads = resolve_threads(threads, count);
    if (threads <= 1) {
        for (Index i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<Index> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (Index i; !stop && (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                stop = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

template <Learner L>
std::vector<double> score_rows(const L& learner, const typename L::model_type& model, const WeightedView& view)
{
    std::vector<double> s(view.size());
    for (Index j = 0; j < view.size(); ++j)
        s[j] = learner.score(model, view.data().z(view.row(j)));
    return s;
}

// Outcome of one grid cell or split: its value(s), or empty after the redraw
// budget ran out, plus the number of failed attempts.
struct CellOutcome {
    std::optional<std::vector<double>> value;
    Index failed_attempts = 0;
};

// Draws splits from `rng` until `body(split)` succeeds, redrawing on
// fold-local errors up to max_redraws times.
template <class Body>
CellOutcome with_redraws(const Dataset& data, const SplitConfig& split_cfg, Rng& rng, Body&& body)
{
    CellOutcome out;
    for (int attempt = 0; attempt <= split_cfg.max_redraws; ++attempt) {
        const SplitAssignment split = draw_split(data, split_cfg, rng);
        try {
            out.value = body(split);
            return out;
        } catch (const Error& e) {
            if (!e.fold_local())
                throw;
            ++out.failed_attempts;
            if (attempt == split_cfg.max_redraws && !out.value)
                return out;
        }
    }
    return out;
}

} // namespace detail

/// One split's value for a (learner, evaluator) pair on given folds.
template <Learner L, Evaluator E>
double evaluate_fold(const L& learner, const E& evaluator, const WeightedView& train, const WeightedView& test)
{
    const auto model = learner.fit(train);
    const auto scores = detail::score_rows(learner, model, test);
    return evaluator(test, scores);
}

struct CvResult {
    double value = 0;
    std::vector<double> values; // one per split
    Index fits = 0;
    Index redraws = 0;
};

/// Repeated random-split cross-validation of a vector-valued fold functional
/// `cell(train, test) -> std::vector<double>` with unit weights. Exposed for
/// paired and multi-output evaluations; most callers want cross_validate.
template <class CellFn>
std::vector<CvResult> cross_validate_cells(const Dataset& data, CellFn&& cell, Index m, Index splits,
                                           std::uint64_t seed, bool stratify, int max_redraws, Index outputs,
                                           unsigned threads = 1)
{
    if (splits < 1)
        fail(ErrorCode::InvalidArgument, "need at least one split");
    const SplitConfig split_cfg{m, stratify, max_redraws};
    std::vector<detail::CellOutcome> cells(splits);
    detail::parallel_for(splits, threads, [&](Index k) {
        Rng rng = make_rng(seed, {stream::point_split, k});
        cells[k] = detail::with_redraws(data, split_cfg, rng, [&](const SplitAssignment& split) {
            return cell(WeightedView::unit(data, split.train), WeightedView::unit(data, split.test));
        });
    });
    std::vector<CvResult> out(outputs);
    Index redraws = 0;
    for (Index k = 0; k < splits; ++k) {
        redraws += cells[k].failed_attempts;
        if (!cells[k].value)
            fail(ErrorCode::DegenerateFold, "split ", k, " failed ", max_redraws + 1, " times at m=", m);
        for (Index d = 0; d < outputs; ++d)
            out[d].values.push_back((*cells[k].value)[d]);
    }
    for (auto& r : out) {
        double s = 0;
        for (double v : r.values)
            s += v;
        r.value = s / static_cast<double>(splits);
        r.fits = splits;
        r.redraws = redraws;
    }
    return out;
}

/// Average of the evaluator over cfg.b_cv_point random splits with training
/// size cfg.m and unit weights.
template <Learner L, Evaluator E>
CvResult cross_validate(const Dataset& data, const L& learner, const E& evaluator, const RunConfig& cfg)
{
    if (cfg.m < 1 || cfg.m + 1 > data.n())
        fail(ErrorCode::InvalidArgument, "m=", cfg.m, " must be in [1, n-1] with n=", data.n());
    auto cell = [&](const WeightedView& train, const WeightedView& test) {
        return std::vector<double>{evaluate_fold(learner, evaluator, train, test)};
    };
    return cross_validate_cells(data, cell, cfg.m, cfg.b_cv_point, cfg.seed, cfg.stratify, cfg.max_redraws, 1,
                                cfg.threads)
        .front();
}

/// Raw bootstrap-by-split grids (one per output) before missing-cell handling.
struct BootstrapGrid {
    std::vector<Eigen::MatrixXd> grids; // NaN marks a cell that exhausted its redraws
    Index m_adj = 0;
    Index cells = 0;
    Index redraws = 0;
};

/// Weighted bootstrap grid of a vector-valued fold functional. Row b uses
/// multinomial weights from stream (boot_weights, b); cell (b, k) draws its
/// split at size m_adj from stream (boot_split, b, k).
template <class CellFn>
BootstrapGrid bootstrap_grid_cells(const Dataset& data, CellFn&& cell, const RunConfig& cfg, Index outputs)
{
    cfg.check(data.n());
    BootstrapGrid out;
    out.m_adj = solve_m_adj(data.n(), cfg.m, cfg.size_penalty);
    out.cells = cfg.b_boot * cfg.b_cv;
    out.grids.assign(outputs, Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(cfg.b_boot),
                                                        static_cast<Eigen::Index>(cfg.b_cv),
                                                        std::numeric_limits<double>::quiet_NaN()));
    const SplitConfig split_cfg{out.m_adj, cfg.stratify, cfg.max_redraws};
    std::vector<Index> failed(cfg.b_boot, 0);
    detail::parallel_for(cfg.b_boot, cfg.threads, [&](Index b) {
        Rng weight_rng = make_rng(cfg.seed, {stream::boot_weights, b});
        const BootWeights weights = draw_boot_weights(data.n(), weight_rng);
        for (Index k = 0; k < cfg.b_cv; ++k) {
            Rng rng = make_rng(cfg.seed, {stream::boot_split, b, k});
            auto res = detail::with_redraws(data, split_cfg, rng, [&](const SplitAssignment& split) {
                auto [train, test] = weighted_fold(data, split, weights);
                return cell(train, test);
            });
            failed[b] += res.failed_attempts;
            if (res.value)
                for (Index d = 0; d < outputs; ++d)
                    out.grids[d](static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k)) = (*res.value)[d];
        }
    });
    for (Index f : failed)
        out.redraws += f;
    return out;
}

/// Inference report from a theta grid and a point estimate.
inline InferenceReport summarize_inference(const ThetaMatrix& theta, double point, const RunConfig& cfg, Index n,
                                           Index m_adj)
{
    InferenceReport r;
    const double adj = adjustment_factor(n, m_adj);
    r.components = estimate_components(theta, adj);
    r.point = point;
    r.se = std::sqrt(r.components.sigma_bt_sq);
    r.se_adj = r.se * std::sqrt(adj);
    r.alpha = cfg.alpha;
    r.z_crit = normal_quantile(1.0 - cfg.alpha / 2.0);
    r.ci_normal = interval_with(point, r.se, r.z_crit);
    r.ci_adj = interval_with(point, r.se_adj, r.z_crit);
    if (cfg.calibrate) {
        const auto cal = calibrate(theta, cfg.alpha, cfg.l_reps, derive_seed(cfg.seed, {stream::calibration}));
        r.c_crit = cal.c_crit;
        r.ci_calibrated = interval_with(point, r.se, cal.c_crit);
        r.ci_calibrated_adj = interval_with(point, r.se_adj, cal.c_crit);
    }
    r.m = cfg.m;
    r.m_adj = m_adj;
    r.n = n;
    r.b_boot = theta.b_boot();
    r.b_cv = theta.b_cv();
    r.b_cv_point = cfg.b_cv_point;
    r.missing_cells = theta.missing_cells();
    r.dropped_rows = theta.dropped_rows();
    r.sigma_clamped = r.components.sigma_bt_sq_raw < 0;
    return r;
}

struct BootstrapResult {
    ThetaMatrix theta;
    InferenceReport report;
};

/// Standard error of the cross-validation estimate by the weighted bootstrap,
/// with normal, size-adjusted and (optionally) calibrated intervals around
/// the unit-weight point estimate at training size m.
template <Learner L, Evaluator E>
BootstrapResult fast_bootstrap(const Dataset& data, const L& learner, const E& evaluator, const RunConfig& cfg)
{
    auto cell = [&](const WeightedView& train, const WeightedView& test) {
        return std::vector<double>{evaluate_fold(learner, evaluator, train, test)};
    };
    const auto grid = bootstrap_grid_cells(data, cell, cfg, 1);
    const auto point = cross_validate(data, learner, evaluator, cfg);
    BootstrapResult out;
    out.theta = ThetaMatrix::from_grid(grid.grids.front(), cfg.max_missing_fraction);
    out.report = summarize_inference(out.theta, point.value, cfg, data.n(), grid.m_adj);
    out.report.fits = {point.fits, grid.cells, point.redraws + grid.redraws};
    out.report.fits_used = out.report.fits.total();
    return out;
}

/// Paired comparison: both learners see identical splits and bootstrap
/// weights; the grid holds theta_a - theta_b and the point estimate is the
/// difference of the two cross-validation estimates.
template <Learner LA, Learner LB, Evaluator E>
BootstrapResult compare_models(const Dataset& data, const LA& learner_a, const LB& learner_b, const E& evaluator,
                               const RunConfig& cfg)
{
    auto cell = [&](const WeightedView& train, const WeightedView& test) {
        const double a = evaluate_fold(learner_a, evaluator, train, test);
        const double b = evaluate_fold(learner_b, evaluator, train, test);
        return std::vector<double>{a - b};
    };
    const auto grid = bootstrap_grid_cells(data, cell, cfg, 1);
    const auto point = cross_validate_cells(data, cell, cfg.m, cfg.b_cv_point, cfg.seed, cfg.stratify,
                                            cfg.max_redraws, 1, cfg.threads)
                           .front();
    BootstrapResult out;
    out.theta = ThetaMatrix::from_grid(grid.grids.front(), cfg.max_missing_fraction);
    out.report = summarize_inference(out.theta, point.value, cfg, data.n(), grid.m_adj);
    out.report.fits = {2 * point.fits, 2 * grid.cells, 2 * (point.redraws + grid.redraws)};
    out.report.fits_used = out.report.fits.total();
    return out;
}

struct NaiveResult {
    double variance = 0; // sample variance of the per-bootstrap CV estimates
    double mean = 0;
    std::vector<double> estimates;
    Index fits = 0;
    static constexpr const char* note = "biased - validation only";
};

/// Resamples rows into concrete datasets and reruns cross-validation on each,
/// so duplicated rows can land on both sides of a split. Kept as a reference
/// for the weighted bootstrap; its variance is biased.
template <Learner L, Evaluator E>
NaiveResult naive_bootstrap(const Dataset& data, const L& learner, const E& evaluator, const RunConfig& cfg)
{
    cfg.check(data.n());
    NaiveResult out;
    out.estimates.resize(cfg.b_boot);
    std::vector<Index> fits(cfg.b_boot, 0);
    detail::parallel_for(cfg.b_boot, cfg.threads, [&](Index b) {
        Rng rng = make_rng(cfg.seed, {stream::naive, b});
        std::uniform_int_distribution<Index> pick(0, data.n() - 1);
        std::vector<Index> rows(data.n());
        for (auto& r : rows)
            r = pick(rng);
        const Dataset resampled = data.subset(rows);
        RunConfig inner = cfg;
        inner.seed = derive_seed(cfg.seed, {stream::naive, b, 1});
        inner.b_cv_point = cfg.b_cv;
        inner.threads = 1;
        const auto cv = cross_validate(resampled, learner, evaluator, inner);
        out.estimates[b] = cv.value;
        fits[b] = cv.fits + cv.redraws;
    });
    for (double v : out.estimates)
        out.mean += v;
    out.mean /= static_cast<double>(cfg.b_boot);
    for (double v : out.estimates)
        out.variance += (v - out.mean) * (v - out.mean);
    out.variance /= static_cast<double>(cfg.b_boot - 1);
    for (Index f : fits)
        out.fits += f;
    return out;
}

struct PilotResult {
    RunConfig config; // input config with (b_boot, b_cv) set from the allocation
    VarianceComponents pilot;
    Allocation allocation;
    Index pilot_fits = 0;
};

/// Runs a small bootstrap grid (pilot_cfg.b_boot x pilot_cfg.b_cv), estimates
/// the variance components and splits total_fits between bootstraps and
/// splits per bootstrap to minimise the variance of sigma^2_BT.
template <Learner L, Evaluator E>
PilotResult pilot_allocate(const Dataset& data, const L& learner, const E& evaluator, const RunConfig& pilot_cfg,
                           Index total_fits)
{
    if (pilot_cfg.b_boot * pilot_cfg.b_cv * 10 > total_fits)
        fail(ErrorCode::InvalidArgument, "pilot grid ", pilot_cfg.b_boot, "x", pilot_cfg.b_cv,
             " exceeds a tenth of the budget ", total_fits);
    auto cell = [&](const WeightedView& train, const WeightedView& test) {
        return std::vector<double>{evaluate_fold(learner, evaluator, train, test)};
    };
    const auto grid = bootstrap_grid_cells(data, cell, pilot_cfg, 1);
    const auto theta = ThetaMatrix::from_grid(grid.grids.front(), pilot_cfg.max_missing_fraction);
    PilotResult out;
    out.pilot = estimate_components(theta, adjustment_factor(data.n(), grid.m_adj));
    out.allocation = optimal_allocation(out.pilot, total_fits);
    out.config = pilot_cfg;
    out.config.b_boot = out.allocation.b_boot;
    out.config.b_cv = out.allocation.b_cv;
    out.pilot_fits = grid.cells + grid.redraws;
    return out;
}

struct PrevalidationConfig {
    Index k = 10;
    Index reps = 20;                  // K-partitions averaged for the point curve
    std::vector<double> grid = default_roc_grid();
    std::uint64_t seed = 0;
    int max_redraws = 100;
    unsigned threads = 1;
    // Pointwise bootstrap intervals; disabled when b_boot == 0.
    Index b_boot = 0;
    Index b_cv = 2;                   // K_adj-fold partitions per bootstrap
    std::optional<Index> k_adj;       // defaults to ceil(1.2 k)
    double alpha = 0.05;
};

struct PrevalidationResult {
    RocCurve curve;            // pointwise mean over reps
    std::vector<double> se;    // per grid point; empty without bootstrap
    std::vector<Interval> ci;  // per grid point
    double auc_se = 0;         // trapezoid auc
    std::optional<Interval> auc_ci;
    Index k_adj = 0;
    Index fits = 0;
    Index redraws = 0;
};

namespace detail {

// One pre-validated ROC curve: rows are dealt into k parts by a random
// permutation; each part is scored by a model fit on the others (weighted by
// `weights`). Rows of weight zero stay unscored and out of the curve.
template <Learner L>
RocCurve prevalidated_curve(const Dataset& data, const L& learner, Index k, const std::vector<double>& weights,
                            const std::vector<double>& grid, Rng& rng)
{
    const Index n = data.n();
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Index> part(n);
    for (Index j = 0; j < n; ++j)
        part[perm[j]] = j % k;

    std::vector<double> scores(n, 0.0);
    for (Index f = 0; f < k; ++f) {
        std::vector<Index> train_rows;
        std::vector<double> train_w;
        for (Index i = 0; i < n; ++i)
            if (part[i] != f) {
                train_rows.push_back(i);
                train_w.push_back(weights[i]);
            }
        const WeightedView train(data, std::move(train_rows), std::move(train_w));
        if (!(train.total_weight() > 0))
            fail(ErrorCode::DegenerateFold, "pre-validation training part has zero weight");
        const auto model = learner.fit(train);
        for (Index i = 0; i < n; ++i)
            if (part[i] == f)
                scores[i] = learner.score(model, data.z(i));
    }
    std::vector<double> outcome(n);
    for (Index i = 0; i < n; ++i)
        outcome[i] = data.y(i);
    try {
        return roc_prevalidated(scores, outcome, grid, weights);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::OneClass)
            fail(ErrorCode::OneClassFold, e.what());
        throw;
    }
}

template <Learner L>
std::optional<RocCurve> prevalidated_with_redraws(const Dataset& data, const L& learner, Index k,
                                                  const std::vector<double>& weights,
                                                  const std::vector<double>& grid, Rng& rng, int max_redraws,
                                                  Index& failed)
{
    for (int attempt = 0; attempt <= max_redraws; ++attempt) {
        try {
            return prevalidated_curve(data, learner, k, weights, grid, rng);
        } catch (const Error& e) {
            if (!e.fold_local())
                throw;
            ++failed;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// K-fold pre-validated ROC curve averaged over random partitions, with
/// optional pointwise bootstrap intervals: each bootstrap row b reweights the
/// data, and each of its b_cv cells is a weighted K_adj-fold pre-validation.
template <Learner L>
PrevalidationResult kfold_prevalidate(const Dataset& data, const L& learner, const PrevalidationConfig& cfg)
{
    const Index n = data.n();
    if (cfg.k < 2 || cfg.k > n)
        fail(ErrorCode::InvalidArgument, "k=", cfg.k, " must be in [2, n]");
    if (cfg.reps < 1)
        fail(ErrorCode::InvalidArgument, "reps must be >= 1");
    for (Index i = 0; i < n; ++i)
        if (!is_binary_value(data.y(i)))
            fail(ErrorCode::NonBinaryOutcome, "pre-validated ROC needs a 0/1 outcome");
    const Index G = cfg.grid.size();

    PrevalidationResult out;
    std::vector<std::optional<RocCurve>> curves(cfg.reps);
    std::vector<Index> failed(cfg.reps, 0);
    const std::vector<double> unit(n, 1.0);
    detail::parallel_for(cfg.reps, cfg.threads, [&](Index r) {
        Rng rng = make_rng(cfg.seed, {stream::kfold, r});
        curves[r] = detail::prevalidated_with_redraws(data, learner, cfg.k, unit, cfg.grid, rng, cfg.max_redraws,
                                                      failed[r]);
    });
    out.curve.grid = cfg.grid;
    std::sort(out.curve.grid.begin(), out.curve.grid.end());
    out.curve.sensitivity.assign(G, 0.0);
    for (Index r = 0; r < cfg.reps; ++r) {
        if (!curves[r])
            fail(ErrorCode::OneClass, "pre-validation partition ", r, " failed ", cfg.max_redraws + 1, " times");
        for (Index g = 0; g < G; ++g)
            out.curve.sensitivity[g] += curves[r]->sensitivity[g] / static_cast<double>(cfg.reps);
        out.curve.auc += curves[r]->auc / static_cast<double>(cfg.reps);
        out.curve.auc_exact += curves[r]->auc_exact / static_cast<double>(cfg.reps);
        out.redraws += failed[r];
    }
    out.fits = cfg.reps * cfg.k + out.redraws * cfg.k;
    if (cfg.b_boot == 0)
        return out;

    if (cfg.b_boot < 2 || cfg.b_cv < 2)
        fail(ErrorCode::InsufficientReplication, "bootstrap intervals need b_boot >= 2 and b_cv >= 2");
    out.k_adj = cfg.k_adj.value_or(static_cast<Index>(std::ceil(1.2 * static_cast<double>(cfg.k) - 1e-9)));
    if (out.k_adj < 2 || out.k_adj > n)
        fail(ErrorCode::InvalidArgument, "k_adj=", out.k_adj, " must be in [2, n]");
    // Outputs: one per grid point, then the trapezoid auc.
    std::vector<Eigen::MatrixXd> grids(G + 1, Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(cfg.b_boot),
                                                                         static_cast<Eigen::Index>(cfg.b_cv),
                                                                         std::numeric_limits<double>::quiet_NaN()));
    std::vector<Index> boot_failed(cfg.b_boot, 0);
    detail::parallel_for(cfg.b_boot, cfg.threads, [&](Index b) {
        Rng weight_rng = make_rng(cfg.seed, {stream::boot_weights, b});
        const BootWeights bw = draw_boot_weights(n, weight_rng);
        const std::vector<double> w(bw.w.begin(), bw.w.end());
        for (Index c = 0; c < cfg.b_cv; ++c) {
            Rng rng = make_rng(cfg.seed, {stream::boot_split, b, c});
            const auto curve = detail::prevalidated_with_redraws(data, learner, out.k_adj, w, cfg.grid, rng,
                                                                 cfg.max_redraws, boot_failed[b]);
            if (!curve)
                continue;
            const auto bi = static_cast<Eigen::Index>(b);
            const auto ci = static_cast<Eigen::Index>(c);
            for (Index g = 0; g < G; ++g)
                grids[g](bi, ci) = curve->sensitivity[g];
            grids[G](bi, ci) = curve->auc;
        }
    });
    for (Index f : boot_failed)
        out.redraws += f;
    out.fits += (cfg.b_boot * cfg.b_cv) * out.k_adj;
    const double z = normal_quantile(1.0 - cfg.alpha / 2.0);
    for (Index g = 0; g <= G; ++g) {
        const auto theta = ThetaMatrix::from_grid(grids[g]);
        const double se = std::sqrt(estimate_components(theta).sigma_bt_sq);
        if (g < G) {
            out.se.push_back(se);
            out.ci.push_back(interval_with(out.curve.sensitivity[g], se, z));
        } else {
            out.auc_se = se;
            out.auc_ci = interval_with(out.curve.auc, se, z);
        }
    }
    return out;
}

} // namespace cvboot
