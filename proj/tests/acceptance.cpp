// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// numbers. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "cvboot/cvboot.hpp"

using namespace cvboot;

namespace {

int g_failed = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail, double seconds)
{
    std::printf("%s criterion %d (%s): %s [%.0fs]\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!pass)
        ++g_failed;
}

template <class... Args>
std::string fmt(const char* f, Args... args)
{
    char buf[1024];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

double sd_of(const std::vector<double>& v)
{
    const double mu = mean_of(v);
    double ss = 0;
    for (double x : v)
        ss += (x - mu) * (x - mu);
    return std::sqrt(ss / double(v.size() - 1));
}

// Two Monte-Carlo standard errors of a coverage rate estimated from n sims
// when the true rate is `reference`.
double coverage_tol(double reference, Index n) { return 2.0 * std::sqrt(reference * (1 - reference) / double(n)); }

const LinearLearner kOls{{.kind = LearnerKind::ols}};
const MetricEvaluator kMape{.metric = Metric::mape};
const MetricEvaluator kCindex{.metric = Metric::c_index};
const MetricEvaluator kAtePos{.metric = Metric::ate_positive};

RunConfig desk_config()
{
    RunConfig cfg;
    cfg.b_boot = 200;
    cfg.b_cv = 20;
    cfg.b_cv_point = 400;
    return cfg;
}

double g_toy_sd = 0; // SD of the toy CV estimates, reused by criterion 7

// 1. Toy example: mean CV estimate over 1000 datasets and Err_80.
void toy_example()
{
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSpec spec{GeneratorKind::linear_lowdim};
    RunConfig cfg = desk_config();
    cfg.m = 80;
    std::vector<double> points(1000);
    for (Index s = 0; s < points.size(); ++s) {
        Rng rng = make_rng(101, {stream::simulation, 2, s});
        const Dataset d = generate(spec, rng);
        cfg.seed = derive_seed(101, {stream::simulation, 3, s});
        points[s] = cross_validate(d, kOls, kMape, cfg).value;
    }
    g_toy_sd = sd_of(points);
    TruthConfig tc;
    tc.train_reps = 5000;
    tc.seed = 102;
    const double truth = true_err_m(spec, kOls, kMape, 80, tc);
    const double mean = mean_of(points);
    const bool pass = std::abs(mean - 0.859) <= 0.01 && std::abs(truth - 0.861) <= 0.005;
    report(1, "toy example", pass,
           fmt("mean CV estimate %.4f (target 0.859 +/- 0.01), Err_80 %.4f (target 0.861 +/- 0.005), SD %.4f", mean,
               truth, g_toy_sd),
           seconds_since(t0));
}

// 2. Linear design, p = 10: bias, empirical SD and adjusted coverage.
void table1_slice()
{
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSpec spec{GeneratorKind::linear_lowdim};
    const std::vector<Index> ms{40, 60, 80};
    const double ref_sd[] = {0.077, 0.074, 0.073};
    const double ref_cov[] = {0.967, 0.960, 0.933};
    TruthConfig tc;
    tc.train_reps = 5000;
    tc.seed = 201;
    std::vector<double> truths;
    for (Index m : ms)
        truths.push_back(true_err_m(spec, kOls, kMape, m, tc));
    CoverageConfig cc;
    cc.n_sims = 200;
    cc.seed = 202;
    const auto rows = coverage_experiment(spec, kOls, kMape, ms, truths, desk_config(), cc);
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const bool ok = r.failed == 0 && std::abs(r.bias) < 0.01 && std::abs(r.sd - ref_sd[i]) <= 0.015 &&
                        std::abs(r.coverage_adj.value - ref_cov[i]) <= 0.035;
        pass = pass && ok;
        detail += fmt("m=%zu truth %.3f bias %+.5f sd %.3f (ref %.3f) cov_adj %.1f%% (ref %.1f%% +/- 3.5)%s; ", r.m,
                      r.truth, r.bias, r.sd, ref_sd[i], 100 * r.coverage_adj.value, 100 * ref_cov[i],
                      ok ? "" : " <-");
    }
    report(2, "linear design coverage", pass, detail, seconds_since(t0));
}

// 3. Logistic design, p = 10: mean c-index and adjusted coverage.
void table5_slice()
{
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSpec spec{GeneratorKind::logistic_lowdim};
    const LinearLearner logit{{.kind = LearnerKind::logistic}};
    const std::vector<Index> ms{40, 80};
    const double ref_mean[] = {0.800, 0.849};
    const double ref_cov[] = {0.947, 0.895};
    TruthConfig tc;
    tc.train_reps = 2000;
    tc.n_test = 50000;
    tc.seed = 301;
    std::vector<double> truths;
    for (Index m : ms)
        truths.push_back(true_err_m(spec, logit, kCindex, m, tc));
    CoverageConfig cc;
    cc.n_sims = 200;
    cc.seed = 302;
    const auto rows = coverage_experiment(spec, logit, kCindex, ms, truths, desk_config(), cc);
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const bool ok = std::abs(r.mean - ref_mean[i]) <= 0.01 &&
                        std::abs(r.coverage_adj.value - ref_cov[i]) <= coverage_tol(ref_cov[i], r.sims);
        pass = pass && ok;
        detail += fmt("m=%zu truth %.3f mean %.4f (ref %.3f) cov_adj %.1f%% (ref %.1f%% +/- %.1f) failed %zu%s; ", r.m,
                      r.truth, r.mean, ref_mean[i], 100 * r.coverage_adj.value, 100 * ref_cov[i],
                      100 * coverage_tol(ref_cov[i], r.sims), r.failed, ok ? "" : " <-");
    }
    report(3, "logistic design coverage", pass, detail, seconds_since(t0));
}

// 4. Treatment-rule design, p = 10, n = 180: mean and unadjusted coverage.
void table7_slice()
{
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSpec spec{GeneratorKind::itr_lowdim};
    const LinearLearner itr{{.kind = LearnerKind::itr_linear}};
    const std::vector<Index> ms{80, 140};
    const double ref_mean[] = {0.377, 0.449};
    const double ref_cov[] = {0.951, 0.954};
    TruthConfig tc;
    tc.train_reps = 5000;
    tc.seed = 401;
    std::vector<double> truths;
    for (Index m : ms)
        truths.push_back(true_err_m(spec, itr, kAtePos, m, tc));
    CoverageConfig cc;
    cc.n_sims = 200;
    cc.seed = 402;
    const auto rows = coverage_experiment(spec, itr, kAtePos, ms, truths, desk_config(), cc);
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const bool ok = std::abs(r.mean - ref_mean[i]) <= 0.02 &&
                        std::abs(r.coverage.value - ref_cov[i]) <= coverage_tol(ref_cov[i], r.sims);
        pass = pass && ok;
        detail += fmt("m=%zu truth %.3f mean %.4f (ref %.3f) cov %.1f%% (ref %.1f%% +/- %.1f) failed %zu%s; ", r.m,
                      r.truth, r.mean, ref_mean[i], 100 * r.coverage.value, 100 * ref_cov[i],
                      100 * coverage_tol(ref_cov[i], r.sims), r.failed, ok ? "" : " <-");
    }
    report(4, "treatment-rule coverage", pass, detail, seconds_since(t0));
}

// 5. High-dimensional smoke run: lasso at p = 200, 20 sims.
void highdim_smoke()
{
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSpec spec{GeneratorKind::linear_highdim, 0, 200};
    const LinearLearner lasso{{.kind = LearnerKind::lasso, .lambda = 0.2}};
    TruthConfig tc;
    tc.train_reps = 2000;
    tc.seed = 501;
    const double truth = true_err_m(spec, lasso, kMape, 80, tc);
    CoverageConfig cc;
    cc.n_sims = 20;
    cc.seed = 502;
    const auto rows = coverage_experiment(spec, lasso, kMape, {80}, {truth}, desk_config(), cc);
    const auto& r = rows.front();
    const bool pass = r.failed == 0 && r.sims == 20 && r.coverage_adj.value >= 0.85;
    report(5, "p=200 lasso smoke", pass,
           fmt("truth %.3f mean %.3f cov_adj %.0f%% cov %.0f%% (need >= 85%%) failed %zu", truth, r.mean,
               100 * r.coverage_adj.value, 100 * r.coverage.value, r.failed),
           seconds_since(t0));
}

// 6. Calibration on a small (20, 25) grid.
void calibration_pattern()
{
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSpec spec{GeneratorKind::linear_lowdim};
    TruthConfig tc;
    tc.train_reps = 5000;
    tc.seed = 601;
    const double truth = true_err_m(spec, kOls, kMape, 80, tc);
    RunConfig cfg = desk_config();
    cfg.b_boot = 20;
    cfg.b_cv = 25;
    cfg.calibrate = true;
    cfg.l_reps = 1000;
    CoverageConfig cc;
    cc.n_sims = 200;
    cc.seed = 602;
    const auto rows = coverage_experiment(spec, kOls, kMape, {80}, {truth}, cfg, cc);
    const auto& r = rows.front();
    const double gain = r.coverage_cal_adj->value - r.coverage_adj.value;
    const bool pass = gain >= 0.03;
    report(6, "calibration", pass,
           fmt("adjusted coverage %.1f%% -> calibrated %.1f%% (gain %+.1f points, need >= +3); unadjusted %.1f%% -> "
               "%.1f%%; median width %.3f -> %.3f; sims %zu failed %zu",
               100 * r.coverage_adj.value, 100 * r.coverage_cal_adj->value, 100 * gain, 100 * r.coverage.value,
               100 * r.coverage_cal->value, r.median_width, r.median_width_cal, r.sims, r.failed),
           seconds_since(t0));
}

// 7. Naive bootstrap: downward bias of about 0.8 SD of the CV estimate.
void naive_bias()
{
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSpec spec{GeneratorKind::linear_lowdim};
    RunConfig cfg = desk_config();
    cfg.m = 80;
    cfg.b_boot = 200;
    cfg.b_cv = 40;
    const Index datasets = 20;
    std::vector<double> gaps;
    for (Index s = 0; s < datasets; ++s) {
        Rng rng = make_rng(701, {stream::simulation, 2, s});
        const Dataset d = generate(spec, rng);
        cfg.seed = derive_seed(701, {stream::simulation, 3, s});
        const double cv = cross_validate(d, kOls, kMape, cfg).value;
        const auto nb = naive_bootstrap(d, kOls, kMape, cfg);
        gaps.push_back(cv - nb.mean);
    }
    const double shift = mean_of(gaps) / g_toy_sd;
    const bool pass = std::abs(shift - 0.8) <= 0.3;
    report(7, "naive bootstrap bias", pass,
           fmt("naive mean below CV estimate by %.2f SD (target 0.8 +/- 0.3; gap %.4f, SD %.4f, %zu datasets x 200 "
               "bootstraps)",
               shift, mean_of(gaps), g_toy_sd, datasets),
           seconds_since(t0));
}

// 8. Property suite, 1000 random instances per property.
struct PropertyResult {
    std::string name;
    Index failures = 0;
};

Eigen::MatrixXd random_effects(Index B, Index K, double s2, double t2, Rng& rng)
{
    std::normal_distribution<double> z(0, 1);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(K));
    for (Eigen::Index b = 0; b < m.rows(); ++b) {
        const double a = std::sqrt(s2) * z(rng);
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            m(b, k) = a + std::sqrt(t2) * z(rng);
    }
    return m;
}

Dataset random_dataset(Rng& rng, Index n, Index p, bool binary, bool treated)
{
    std::normal_distribution<double> z(0, 1);
    Dataset d;
    d.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    d.outcome.resize(static_cast<Eigen::Index>(n));
    if (treated)
        d.treatment = Eigen::VectorXd(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < d.features.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.features.cols(); ++j)
            d.features(i, j) = z(rng);
        double eta = 0.3 + d.features(i, 0);
        if (treated) {
            const double g = i % 2 ? 1.0 : 0.0;
            (*d.treatment)[i] = g;
            eta += g * d.features(i, 1 % p);
        }
        d.outcome[i] = binary ? (std::bernoulli_distribution(detail::expit(eta))(rng) ? 1.0 : 0.0) : eta + z(rng);
    }
    if (binary) {
        d.outcome[0] = 0;
        d.outcome[1] = 1;
    }
    d.kind = binary ? OutcomeKind::binary : OutcomeKind::continuous;
    return validate(d);
}

WeightedView random_weights(const Dataset& d, Rng& rng)
{
    std::vector<Index> rows(d.n());
    std::vector<double> w(d.n());
    for (Index i = 0; i < d.n(); ++i) {
        rows[i] = i;
        w[i] = std::uniform_int_distribution<int>(0, 3)(rng);
    }
    w[0] = w[1] = 1;
    return WeightedView(d, rows, w);
}

void property_suite()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<PropertyResult> results;
    Rng rng(801);
    const int N = 1000;

    {
        PropertyResult r{"variance identity"};
        for (int t = 0; t < N; ++t) {
            const Index B = std::uniform_int_distribution<Index>(2, 40)(rng);
            const Index K = std::uniform_int_distribution<Index>(2, 40)(rng);
            const auto m = random_effects(B, K, 0.4, 1.5, rng);
            const Eigen::VectorXd means = m.rowwise().mean();
            const double var = (means.array() - means.mean()).square().sum() / double(B - 1);
            const auto vc = estimate_components(ThetaMatrix(m));
            r.failures += std::abs(vc.sigma_bt_sq_raw + vc.tau0_sq / double(K) - var) > 1e-10 * (1 + var);
        }
        results.push_back(r);
    }
    {
        PropertyResult r{"moment unbiasedness"};
        const double s2 = 0.3, t2 = 2.0;
        std::vector<double> sig, tau;
        for (int t = 0; t < N; ++t) {
            const auto vc = estimate_components(ThetaMatrix(random_effects(40, 8, s2, t2, rng)));
            sig.push_back(vc.sigma_bt_sq_raw);
            tau.push_back(vc.tau0_sq);
        }
        r.failures += std::abs(mean_of(sig) - s2) > 4 * sd_of(sig) / std::sqrt(double(N));
        r.failures += std::abs(mean_of(tau) - t2) > 4 * sd_of(tau) / std::sqrt(double(N));
        results.push_back(r);
    }
    {
        PropertyResult r{"frequency weights"};
        const std::vector<LearnerSpec> specs = {
            {.kind = LearnerKind::ols},
            {.kind = LearnerKind::lasso, .lambda = 0.05},
            {.kind = LearnerKind::logistic, .separation = SeparationPolicy::keep},
            {.kind = LearnerKind::lasso_logistic, .lambda = 0.03},
            {.kind = LearnerKind::itr_linear},
            {.kind = LearnerKind::itr_lasso, .lambda = 0.03},
        };
        for (int t = 0; t < N; ++t) {
            const auto& spec = specs[t % specs.size()];
            const bool binary = is_binary_learner(spec.kind);
            const bool treated = is_itr(spec.kind);
            const Dataset d = random_dataset(rng, 40, 3, binary, treated);
            const WeightedView view = random_weights(d, rng);
            const Dataset expanded = view.expand();
            try {
                const auto a = fit(view, spec);
                const auto b = fit(WeightedView::all(expanded), spec);
                r.failures += (a.coef - b.coef).cwiseAbs().maxCoeff() > 1e-5 * (1 + a.coef.cwiseAbs().maxCoeff());
                // Metrics on the same view against its expansion.
                std::vector<double> sa, sb;
                for (Index j = 0; j < view.size(); ++j)
                    sa.push_back(a.score(d.z(view.row(j))));
                for (Index i = 0; i < expanded.n(); ++i)
                    sb.push_back(a.score(expanded.z(i)));
                const auto all = WeightedView::all(expanded);
                if (treated) {
                    for (auto side : {Subgroup::positive, Subgroup::nonpositive}) {
                        try {
                            r.failures += std::abs(subgroup_ate(view, sa, side) - subgroup_ate(all, sb, side)) > 1e-10;
                        } catch (const Error& e) {
                            r.failures += e.code() != ErrorCode::EmptySubgroupArm;
                        }
                    }
                } else if (binary) {
                    r.failures += std::abs(c_index(view, sa) - c_index(all, sb)) > 1e-12;
                } else {
                    r.failures += std::abs(mape(view, sa) - mape(all, sb)) > 1e-12;
                }
            } catch (const Error& e) {
                r.failures += !e.fold_local();
            }
        }
        results.push_back(r);
    }
    {
        PropertyResult kkt{"lasso KKT"}, zero{"lambda_max zeroing"};
        for (int t = 0; t < N; ++t) {
            const Index n = std::uniform_int_distribution<Index>(20, 60)(rng);
            const Index p = std::uniform_int_distribution<Index>(2, 30)(rng);
            const Dataset d = random_dataset(rng, n, p, false, false);
            const auto view = WeightedView::all(d);
            const double lmax = lasso_lambda_max(view);
            const double lambda = lmax * std::uniform_real_distribution<double>(0.05, 0.9)(rng);
            const double tol = 1e-7;
            const auto m = fit_lasso(view, {.kind = LearnerKind::lasso, .lambda = lambda, .tol = tol});
            const Eigen::RowVectorXd mean = d.features.colwise().mean();
            const Eigen::MatrixXd c = d.features.rowwise() - mean;
            const Eigen::VectorXd resid =
                (d.outcome - d.features * m.coef.tail(p)).array() - m.coef[0];
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
                const double sd = std::sqrt(c.col(j).squaredNorm() / double(n));
                const double g = c.col(j).dot(resid) / sd / double(n);
                const double b = m.coef[j + 1];
                const double excess = b == 0 ? std::abs(g) - lambda : std::abs(g - lambda * (b > 0 ? 1 : -1));
                kkt.failures += excess > 10 * tol;
            }
            const auto z = fit_lasso(view, {.kind = LearnerKind::lasso, .lambda = lmax * (1 + 1e-9)});
            zero.failures += z.coef.tail(p).cwiseAbs().maxCoeff() != 0.0;
        }
        results.push_back(kkt);
        results.push_back(zero);
    }
    {
        PropertyResult r{"c-index oracle"};
        for (int t = 0; t < N; ++t) {
            const int n = std::uniform_int_distribution<int>(4, 50)(rng);
            std::vector<double> s(n), y(n), w(n);
            for (int i = 0; i < n; ++i) {
                s[i] = std::uniform_int_distribution<int>(0, 6)(rng);
                y[i] = i < 2 ? i : std::bernoulli_distribution(0.4)(rng);
                w[i] = std::uniform_int_distribution<int>(1, 3)(rng);
            }
            Dataset d;
            d.features = Eigen::MatrixXd::Zero(n, 1);
            d.outcome = Eigen::Map<Eigen::VectorXd>(y.data(), n);
            d = validate(d);
            std::vector<Index> rows(n);
            std::iota(rows.begin(), rows.end(), Index{0});
            const WeightedView v(d, rows, w);
            double num = 0, den = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (y[i] == 1 && y[j] == 0) {
                        den += w[i] * w[j];
                        num += w[i] * w[j] * (s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0);
                    }
            r.failures += std::abs(c_index(v, s) - num / den) > 1e-12;
        }
        results.push_back(r);
    }
    {
        PropertyResult r{"m_adj oracle"};
        for (int t = 0; t < N; ++t) {
            const Index n = std::uniform_int_distribution<Index>(3, 500)(rng);
            const Index m = std::uniform_int_distribution<Index>(1, n - 1)(rng);
            const double lambda = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
            Index best = 0;
            double best_loss = 1e300;
            for (Index c = m; c < n; ++c) {
                const double a = 0.632 * double(c) / double(m) - 1.0;
                const double b = double(n - m) / double(n - c) - 1.0;
                const double loss = a * a + lambda * b * b;
                if (loss < best_loss - 1e-15) {
                    best_loss = loss;
                    best = c;
                }
            }
            r.failures += solve_m_adj(n, m, lambda) != best;
        }
        results.push_back(r);
    }
    {
        PropertyResult r{"allocation oracle"};
        for (int t = 0; t < N; ++t) {
            const double s2 = std::exp(std::uniform_real_distribution<double>(-6, 1)(rng));
            const double t2 = std::exp(std::uniform_real_distribution<double>(-3, 4)(rng));
            const Index total = std::uniform_int_distribution<Index>(4, 2000)(rng);
            const VarianceComponents vc{s2, t2, s2, 1};
            double best = 1e300;
            for (Index K = 2; K <= total / 2; ++K)
                for (Index B = 2; B * K <= total; ++B)
                    best = std::min(best, variance_of_variance(vc, B, K));
            const auto a = optimal_allocation(vc, total);
            r.failures += a.b_boot * a.b_cv > total ||
                          std::abs(variance_of_variance(vc, a.b_boot, a.b_cv) - best) > 1e-12 * best;
        }
        results.push_back(r);
    }
    {
        // Rows whose cells are identical: no split noise, so resampled sigma*
        // is close to sigma and the critical value close to z_{0.975}.
        PropertyResult r{"calibration identical rows"};
        std::normal_distribution<double> z(0, 1);
        Eigen::MatrixXd m(2000, 5);
        for (Eigen::Index b = 0; b < m.rows(); ++b)
            m.row(b).setConstant(z(rng));
        const auto cal = calibrate(ThetaMatrix(m), 0.05, 20000, 802);
        r.failures += std::abs(cal.c_crit - 1.96) > 0.05;
        r.name += fmt(" c=%.3f", cal.c_crit);
        results.push_back(r);
    }
    {
        PropertyResult r{"seed determinism"};
        Rng drng = make_rng(803, {0});
        const Dataset d = generate({GeneratorKind::linear_lowdim}, drng);
        RunConfig cfg = desk_config();
        cfg.m = 80;
        cfg.b_boot = 50;
        cfg.b_cv = 10;
        cfg.b_cv_point = 50;
        cfg.seed = 804;
        const auto a = fast_bootstrap(d, kOls, kMape, cfg);
        const auto b = fast_bootstrap(d, kOls, kMape, cfg);
        cfg.threads = 3;
        const auto c = fast_bootstrap(d, kOls, kMape, cfg);
        r.failures += a.theta.rows() != b.theta.rows();
        r.failures += a.theta.rows() != c.theta.rows();
        r.failures += a.report.point != b.report.point;
        results.push_back(r);
    }

    bool pass = true;
    std::string detail;
    for (const auto& r : results) {
        pass = pass && r.failures == 0;
        detail += fmt("%s %s; ", r.name.c_str(), r.failures == 0 ? "ok" : fmt("%zu failures", r.failures).c_str());
    }
    report(8, "property suite", pass, detail, seconds_since(t0));
}

} // namespace

int main()
{
    const std::vector<std::function<void()>> criteria = {toy_example,   table1_slice,        table5_slice,
                                                          table7_slice,  highdim_smoke,       calibration_pattern,
                                                          naive_bias,    property_suite};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("FAIL criterion (exception): %s\n", e.what());
            ++g_failed;
        }
    }
    std::printf("%d of %zu criteria failed\n", g_failed, criteria.size());
    return g_failed == 0 ? 0 : 1;
}
