#include <catch_amalgamated.hpp>

#include <cmath>

#include "cvboot/engine.hpp"
#include "cvboot/sim.hpp"

using namespace cvboot;

namespace {

Dataset linear_data(std::uint64_t seed, Index n = 90)
{
    Rng rng = make_rng(seed, {0});
    return generate({GeneratorKind::linear_lowdim, n}, rng);
}

Dataset logistic_data(std::uint64_t seed)
{
    Rng rng = make_rng(seed, {0});
    return generate({GeneratorKind::logistic_lowdim}, rng);
}

// Predicts the weighted training mean; exercises the Learner concept with a
// non-library model type.
struct MeanLearner {
    using model_type = double;
    double fit(const WeightedView& v) const
    {
        double s = 0;
        for (Index j = 0; j < v.size(); ++j)
            s += v.weight(j) * v.data().y(v.row(j));
        return s / v.total_weight();
    }
    template <class Row>
    double score(double model, const Row&) const
    {
        return model;
    }
};

struct ConstantEvaluator {
    double operator()(const WeightedView&, std::span<const double>) const { return 0.25; }
};

// Fails (fold-locally) whenever row 0 sits in the test fold.
struct PickyEvaluator {
    double operator()(const WeightedView& test, std::span<const double> s) const
    {
        for (Index j = 0; j < test.size(); ++j)
            if (test.row(j) == 0)
                fail(ErrorCode::DegenerateFold, "row 0 in test");
        return mape(test, s);
    }
};

struct AlwaysFails {
    double operator()(const WeightedView&, std::span<const double>) const
    {
        fail(ErrorCode::DegenerateFold, "never");
    }
};

struct Misconfigured {
    double operator()(const WeightedView&, std::span<const double>) const
    {
        fail(ErrorCode::InvalidArgument, "bad config");
    }
};

RunConfig small_cfg()
{
    RunConfig cfg;
    cfg.m = 80;
    cfg.b_boot = 20;
    cfg.b_cv = 5;
    cfg.b_cv_point = 30;
    cfg.seed = 42;
    return cfg;
}

const LinearLearner kOls{{.kind = LearnerKind::ols}};
const MetricEvaluator kMape{.metric = Metric::mape};

} // namespace

static_assert(Learner<LinearLearner>);
static_assert(Learner<MeanLearner>);
static_assert(Evaluator<MetricEvaluator>);
static_assert(!Evaluator<int>);

TEST_CASE("grid cells reproduce from their named streams")
{
    auto d = linear_data(1);
    auto cfg = small_cfg();
    auto res = fast_bootstrap(d, kOls, kMape, cfg);
    const Eigen::MatrixXd theta = res.theta.dense();
    const Index m_adj = solve_m_adj(d.n(), cfg.m);
    CHECK(res.report.m_adj == m_adj);
    for (Index b : {Index{0}, Index{7}, Index{19}})
        for (Index k : {Index{0}, Index{4}}) {
            Rng wrng = make_rng(cfg.seed, {stream::boot_weights, b});
            const auto w = draw_boot_weights(d.n(), wrng);
            Rng srng = make_rng(cfg.seed, {stream::boot_split, b, k});
            const auto split = draw_split(d, SplitConfig{m_adj, false, 100}, srng);
            auto [train, test] = weighted_fold(d, split, w);
            const auto model = fit_ols(train);
            std::vector<double> s;
            for (Index j = 0; j < test.size(); ++j)
                s.push_back(model.score(d.z(test.row(j))));
            CHECK(theta(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k)) ==
                  Catch::Approx(mape(test, s)).epsilon(1e-12));
        }
}

TEST_CASE("point estimate averages unit-weight splits at m")
{
    auto d = linear_data(2);
    auto cfg = small_cfg();
    auto cv = cross_validate(d, kOls, kMape, cfg);
    REQUIRE(cv.values.size() == 30);
    double total = 0;
    for (Index k = 0; k < 30; ++k) {
        Rng rng = make_rng(cfg.seed, {stream::point_split, k});
        const auto split = draw_split(d, SplitConfig{cfg.m, false, 100}, rng);
        auto train = WeightedView::unit(d, split.train);
        auto test = WeightedView::unit(d, split.test);
        const double v = evaluate_fold(kOls, kMape, train, test);
        CHECK(cv.values[k] == Catch::Approx(v).epsilon(1e-12));
        total += v;
    }
    CHECK(cv.value == Catch::Approx(total / 30));
}

TEST_CASE("results do not depend on the thread count")
{
    auto d = linear_data(3);
    auto cfg = small_cfg();
    cfg.b_boot = 100;
    cfg.b_cv = 10;
    cfg.calibrate = true;
    cfg.l_reps = 200;
    auto one = fast_bootstrap(d, kOls, kMape, cfg);
    cfg.threads = 4;
    auto four = fast_bootstrap(d, kOls, kMape, cfg);
    CHECK(one.theta.dense() == four.theta.dense());
    CHECK(one.report.point == four.report.point);
    CHECK(*one.report.c_crit == *four.report.c_crit);
    cfg.seed = 43;
    auto other = fast_bootstrap(d, kOls, kMape, cfg);
    CHECK(other.theta.dense() != one.theta.dense());
}

TEST_CASE("report fields follow from the grid")
{
    auto d = linear_data(4);
    auto cfg = small_cfg();
    auto r = fast_bootstrap(d, kOls, kMape, cfg).report;
    CHECK(r.n == 90);
    CHECK(r.m_adj == 81);
    CHECK(r.se == Catch::Approx(std::sqrt(r.components.sigma_bt_sq)));
    CHECK(r.se_adj == Catch::Approx(r.se * std::sqrt((90 - 0.368 * 81) / 90.0)));
    CHECK(r.ci_normal.lo == Catch::Approx(r.point - 1.959963984540054 * r.se));
    CHECK(r.ci_adj.hi == Catch::Approx(r.point + 1.959963984540054 * r.se_adj));
    CHECK(r.fits.point == 30);
    CHECK(r.fits.bootstrap == 100);
    CHECK(r.fits_used == 130 + r.fits.redraws);
    CHECK_FALSE(r.c_crit.has_value());
}

TEST_CASE("a constant evaluator gives zero standard error")
{
    auto d = linear_data(5);
    auto r = fast_bootstrap(d, kOls, ConstantEvaluator{}, small_cfg()).report;
    CHECK(r.point == 0.25);
    CHECK(r.se == 0.0);
    CHECK(r.ci_normal.lo == 0.25);
    CHECK(r.ci_normal.hi == 0.25);
}

TEST_CASE("generic learners plug into the engine")
{
    auto d = linear_data(6);
    auto cfg = small_cfg();
    cfg.b_boot = 200;
    cfg.b_cv = 10;
    auto r = fast_bootstrap(d, MeanLearner{}, kMape, cfg).report;
    CHECK(std::isfinite(r.point));
    CHECK(r.se > 0);
}

TEST_CASE("fold-local failures are redrawn and counted")
{
    auto d = linear_data(7);
    auto cfg = small_cfg();
    auto res = fast_bootstrap(d, kOls, PickyEvaluator{}, cfg);
    CHECK(res.report.fits.redraws > 0);
    CHECK(res.theta.missing_cells() == 0);
    CHECK(res.report.fits_used == 130 + res.report.fits.redraws);
}

TEST_CASE("exhausted redraws leave missing cells, then fail the run")
{
    auto d = linear_data(8);
    auto cfg = small_cfg();
    cfg.max_redraws = 2;
    CHECK_THROWS_AS(cross_validate(d, kOls, AlwaysFails{}, cfg), Error);
    CHECK_THROWS_AS(fast_bootstrap(d, kOls, AlwaysFails{}, cfg), Error);
}

TEST_CASE("other errors propagate without redraws")
{
    auto d = linear_data(9);
    auto cfg = small_cfg();
    cfg.threads = 3;
    try {
        fast_bootstrap(d, kOls, Misconfigured{}, cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("run configuration is validated")
{
    auto d = linear_data(10);
    auto cfg = small_cfg();
    cfg.m = 90;
    CHECK_THROWS_AS(fast_bootstrap(d, kOls, kMape, cfg), Error);
    cfg = small_cfg();
    cfg.b_cv = 1;
    CHECK_THROWS_AS(fast_bootstrap(d, kOls, kMape, cfg), Error);
}

TEST_CASE("paired comparison grid is the difference of the separate grids")
{
    auto d = linear_data(11);
    auto cfg = small_cfg();
    const LinearLearner lasso{{.kind = LearnerKind::lasso, .lambda = 0.1}};
    auto a = fast_bootstrap(d, kOls, kMape, cfg);
    auto b = fast_bootstrap(d, lasso, kMape, cfg);
    auto diff = compare_models(d, kOls, lasso, kMape, cfg);
    CHECK((diff.theta.dense() - (a.theta.dense() - b.theta.dense())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(diff.report.point == Catch::Approx(a.report.point - b.report.point));
    CHECK(diff.report.fits.bootstrap == 200);

    auto same = compare_models(d, kOls, kOls, kMape, cfg);
    CHECK(same.report.point == 0.0);
    CHECK(same.report.se == 0.0);
}

TEST_CASE("naive bootstrap reruns cross-validation on resampled datasets")
{
    auto d = linear_data(12);
    auto cfg = small_cfg();
    auto nb = naive_bootstrap(d, kOls, kMape, cfg);
    CHECK(nb.estimates.size() == 20);
    CHECK(nb.variance > 0);
    CHECK(nb.fits >= 20 * 5);
    CHECK(std::string(NaiveResult::note) == "biased - validation only");
    auto again = naive_bootstrap(d, kOls, kMape, cfg);
    CHECK(again.estimates == nb.estimates);
}

TEST_CASE("pilot allocation respects the budget")
{
    auto d = linear_data(13);
    auto cfg = small_cfg();
    cfg.b_boot = 40;
    cfg.b_cv = 10;
    auto p = pilot_allocate(d, kOls, kMape, cfg, 8000);
    CHECK(p.allocation.b_boot * p.allocation.b_cv <= 8000);
    CHECK(p.config.b_boot == p.allocation.b_boot);
    CHECK(p.pilot_fits >= 400);
    CHECK_THROWS_AS(pilot_allocate(d, kOls, kMape, cfg, 3999), Error);
}

TEST_CASE("stratified splits keep logistic folds two-class")
{
    auto d = logistic_data(14);
    auto cfg = small_cfg();
    cfg.m = 40;
    cfg.stratify = true;
    const LinearLearner logit{{.kind = LearnerKind::logistic, .separation = SeparationPolicy::keep}};
    auto r = fast_bootstrap(d, logit, MetricEvaluator{.metric = Metric::c_index}, cfg).report;
    CHECK(r.point > 0.5);
    CHECK(r.point < 1.0);
}

TEST_CASE("pre-validated ROC curve and its bootstrap intervals")
{
    auto d = logistic_data(15);
    const LinearLearner logit{{.kind = LearnerKind::logistic, .separation = SeparationPolicy::keep}};
    PrevalidationConfig pc;
    pc.k = 10;
    pc.reps = 3;
    pc.seed = 5;
    auto plain = kfold_prevalidate(d, logit, pc);
    CHECK(plain.se.empty());
    CHECK(plain.curve.sensitivity.size() == 19);
    CHECK(plain.fits == 30 + 10 * plain.redraws);
    for (std::size_t g = 1; g < plain.curve.sensitivity.size(); ++g)
        CHECK(plain.curve.sensitivity[g] >= plain.curve.sensitivity[g - 1]);

    // One partition reproduced directly from its stream.
    Rng rng = make_rng(pc.seed, {stream::kfold, 0});
    auto first = detail::prevalidated_curve(d, logit, 10, std::vector<double>(d.n(), 1.0), pc.grid, rng);
    pc.reps = 1;
    auto single = kfold_prevalidate(d, logit, pc);
    CHECK(single.curve.sensitivity == first.sensitivity);

    pc.reps = 2;
    pc.b_boot = 10;
    pc.b_cv = 2;
    auto boot = kfold_prevalidate(d, logit, pc);
    CHECK(boot.k_adj == 12);
    REQUIRE(boot.se.size() == 19);
    for (std::size_t g = 0; g < 19; ++g) {
        CHECK(boot.se[g] >= 0);
        CHECK(boot.ci[g].lo <= boot.curve.sensitivity[g]);
    }
    CHECK(boot.auc_ci.has_value());
    pc.threads = 4;
    auto boot4 = kfold_prevalidate(d, logit, pc);
    CHECK(boot4.se == boot.se);
}
