// Cross-validated MAE of least squares on a simulated linear dataset, with a
// bootstrap standard error and 95% intervals.

#include <cstdio>

#include "cvboot/cvboot.hpp"

int main()
{
    cvboot::Rng rng = cvboot::make_rng(2024, {0});
    const cvboot::Dataset data = cvboot::generate({cvboot::GeneratorKind::linear_lowdim}, rng);

    cvboot::RunConfig cfg;
    cfg.m = 80;
    cfg.b_boot = 200;
    cfg.b_cv = 20;
    cfg.seed = 7;
    cfg.calibrate = true;

    const cvboot::LinearLearner ols{{.kind = cvboot::LearnerKind::ols}};
    const cvboot::MetricEvaluator mae{.metric = cvboot::Metric::mape};
    const auto res = cvboot::fast_bootstrap(data, ols, mae, cfg);
    const auto& r = res.report;

    std::printf("n=%zu m=%zu m_adj=%zu\n", r.n, r.m, r.m_adj);
    std::printf("CV estimate      %.4f\n", r.point);
    std::printf("SE / adjusted SE %.4f / %.4f\n", r.se, r.se_adj);
    std::printf("95%% CI           [%.4f, %.4f]\n", r.ci_normal.lo, r.ci_normal.hi);
    std::printf("95%% CI adjusted  [%.4f, %.4f]\n", r.ci_adj.lo, r.ci_adj.hi);
    std::printf("calibrated c     %.3f -> [%.4f, %.4f]\n", *r.c_crit, r.ci_calibrated_adj->lo,
                r.ci_calibrated_adj->hi);
    std::printf("model fits       %zu\n", r.fits_used);
}
