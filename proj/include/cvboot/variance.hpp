#pragma once

// Moment estimator for the one-way random-effects model
//     theta_bk = theta_0 + e_b + e_bk,   Var(e_b) = sigma_BT^2, Var(e_bk) = tau_0^2,
// its Monte-Carlo precision, budget allocation between bootstraps and splits,
// normal intervals, and the second-level bootstrap that calibrates the
// critical value for small grids.

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cvboot/core.hpp"
#include "cvboot/rng.hpp"

namespace cvboot {

/// Per-bootstrap-row summary: cell count, mean, and within-row sum of squares.
struct RowSummary {
    Index count = 0;
    double mean = 0;
    double ss = 0;
};

inline RowSummary summarize_row(std::span<const double> row)
{
    RowSummary s;
    s.count = row.size();
    for (double v : row)
        s.mean += v;
    s.mean /= static_cast<double>(s.count);
    for (double v : row)
        s.ss += (v - s.mean) * (v - s.mean);
    return s;
}

inline std::vector<RowSummary> summarize_rows(const ThetaMatrix& theta)
{
    std::vector<RowSummary> out;
    out.reserve(theta.b_boot());
    for (const auto& row : theta.rows())
        out.push_back(summarize_row(row));
    return out;
}

namespace detail {

// sigma^2 raw and tau^2 from row summaries, optionally through a row index
// list (used for resampling without copying rows).
template <class RowAt>
std::pair<double, double> moment_components(Index b_boot, RowAt&& row_at)
{
    double grand = 0;
    for (Index b = 0; b < b_boot; ++b)
        grand += row_at(b).mean;
    grand /= static_cast<double>(b_boot);

    double between = 0;
    double within_correction = 0;
    double ss_total = 0;
    double dof_total = 0;
    for (Index b = 0; b < b_boot; ++b) {
        const RowSummary& r = row_at(b);
        const double d = r.mean - grand;
        between += d * d;
        const double k = static_cast<double>(r.count);
        within_correction += r.ss / (k * (k - 1.0));
        ss_total += r.ss;
        dof_total += k - 1.0;
    }
    between /= static_cast<double>(b_boot - 1);
    within_correction /= static_cast<double>(b_boot);
    return {between - within_correction, ss_total / dof_total};
}

inline void check_replication(const ThetaMatrix& theta)
{
    if (theta.b_boot() < 2 || theta.b_cv() < 2)
        fail(ErrorCode::InsufficientReplication, "need b_boot >= 2 and b_cv >= 2, got ", theta.b_boot(), " x ",
             theta.b_cv());
    for (const auto& row : theta.rows())
        if (row.size() < 2)
            fail(ErrorCode::InsufficientReplication, "a bootstrap row has fewer than 2 cells");
}

} // namespace detail

/// Between/within variance components of a theta grid. With balanced rows:
///   sigma^2_raw = Var_b(mean_b) - sum_bk (theta_bk - mean_b)^2 / (B_CV (B_CV-1) B_BOOT)
///   tau^2       = sum_bk (theta_bk - mean_b)^2 / (B_BOOT (B_CV-1))
/// Rows with missing cells use their own cell count in both denominators.
inline VarianceComponents estimate_components(const ThetaMatrix& theta, double adj_factor = 1.0)
{
    detail::check_replication(theta);
    const auto rows = summarize_rows(theta);
    const auto [raw, tau] = detail::moment_components(rows.size(), [&](Index b) -> const RowSummary& { return rows[b]; });
    VarianceComponents vc;
    vc.sigma_bt_sq_raw = raw;
    vc.sigma_bt_sq = std::max(raw, 0.0);
    vc.tau0_sq = std::max(tau, 0.0);
    vc.adj_factor = adj_factor;
    return vc;
}

/// Approximate sampling variance of sigma^2_BT for a (b_boot, b_cv) grid,
/// assuming Gaussian random effects.
inline double variance_of_variance(const VarianceComponents& vc, Index b_boot, Index b_cv)
{
    if (b_boot < 2 || b_cv < 2)
        fail(ErrorCode::InsufficientReplication, "b_boot and b_cv must be >= 2");
    const double B = static_cast<double>(b_boot);
    const double K = static_cast<double>(b_cv);
    const double row_mean_var = vc.sigma_bt_sq + vc.tau0_sq / K;
    const double split_var = vc.tau0_sq / K;
    return 2.0 * row_mean_var * row_mean_var / (B - 1.0) + 2.0 * split_var * split_var / (B * (K - 1.0));
}

struct Allocation {
    Index b_boot = 0;
    Index b_cv = 0;
};

/// Splits a budget of total_fits model trainings between bootstraps and
/// splits per bootstrap so that variance_of_variance is smallest. b_cv ranges
/// over [2, total_fits/2] with b_boot = floor(total_fits / b_cv); the
/// optimum sits near b_cv = tau^2 / sigma^2. Ties go to the smaller b_cv.
inline Allocation optimal_allocation(const VarianceComponents& vc, Index total_fits)
{
    if (total_fits < 4)
        fail(ErrorCode::InvalidArgument, "total_fits must be >= 4, got ", total_fits);
    if (!(vc.sigma_bt_sq > 0))
        fail(ErrorCode::ZeroBetweenVariance,
             "between-bootstrap variance estimate is zero; run a larger pilot (more splits per bootstrap)");
    Allocation best{total_fits / 2, 2};
    double best_v = variance_of_variance(vc, best.b_boot, best.b_cv);
    for (Index k = 3; k <= total_fits / 2; ++k) {
        const Index b = total_fits / k;
        if (b < 2)
            break;
        const double v = variance_of_variance(vc, b, k);
        if (v < best_v) {
            best_v = v;
            best = {b, k};
        }
    }
    return best;
}

/// Standard normal quantile.
inline double normal_quantile(double p)
{
    static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
    return boost::math::quantile(std_normal, p);
}

inline Interval interval_with(double point, double se, double crit) { return {point - crit * se, point + crit * se}; }

/// point -/+ z_{1-alpha/2} se.
inline Interval normal_ci(double point, double se, double alpha)
{
    if (!(se >= 0))
        fail(ErrorCode::InvalidArgument, "se must be >= 0");
    if (!(alpha > 0 && alpha < 1))
        fail(ErrorCode::InvalidArgument, "alpha must be in (0,1)");
    return interval_with(point, se, normal_quantile(1.0 - alpha / 2.0));
}

struct CalibrationResult {
    double c_crit = 0;
    std::vector<double> z_star;
    Index l_count = 0;
    Index rejected = 0; // resamples redrawn because sigma*^2 <= 0
};

/// Order statistic ceil(q L) (1-based) of |values|.
inline double upper_quantile_abs(std::vector<double> values, double q)
{
    for (double& v : values)
        v = std::abs(v);
    const auto L = values.size();
    auto rank = static_cast<Index>(std::ceil(q * static_cast<double>(L) - 1e-9));
    rank = std::clamp<Index>(rank, 1, L);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
    return values[rank - 1];
}

/// Critical value for a small (b_boot, b_cv) grid. Each replicate l resamples
/// whole bootstrap rows of theta, recomputes sigma*_l, and forms
/// Z*_l = Z_l sigma_BT / sigma*_l with Z_l ~ N(0,1); c_crit is the ceil((1-alpha) L)
/// order statistic of |Z*_l|. Resamples with sigma*^2 <= 0 are redrawn (up to
/// 100 times per l). Replicate l draws from its own stream below `seed`.
inline CalibrationResult calibrate(const ThetaMatrix& theta, double alpha, Index l_reps, std::uint64_t seed)
{
    if (!(alpha > 0 && alpha < 1))
        fail(ErrorCode::InvalidArgument, "alpha must be in (0,1)");
    if (l_reps < 1)
        fail(ErrorCode::InvalidArgument, "l_reps must be >= 1");
    detail::check_replication(theta);
    const auto rows = summarize_rows(theta);
    const Index B = rows.size();
    const auto [raw, tau] = detail::moment_components(B, [&](Index b) -> const RowSummary& { return rows[b]; });
    (void)tau;
    if (!(raw > 0))
        fail(ErrorCode::CalibrationDegenerate, "sigma_BT^2 estimate is not positive; cannot calibrate");
    const double sigma = std::sqrt(raw);

    constexpr int kMaxAttempts = 100;
    CalibrationResult res;
    res.l_count = l_reps;
    res.z_star.resize(l_reps);
    std::vector<Index> picks(B);
    Index attempts_total = 0;
    for (Index l = 0; l < l_reps; ++l) {
        Rng rng = make_rng(seed, {stream::calibration, l});
        std::uniform_int_distribution<Index> pick(0, B - 1);
        double sigma_star_sq = 0;
        int attempt = 0;
        for (; attempt < kMaxAttempts; ++attempt) {
            ++attempts_total;
            for (Index b = 0; b < B; ++b)
                picks[b] = pick(rng);
            sigma_star_sq =
                detail::moment_components(B, [&](Index b) -> const RowSummary& { return rows[picks[b]]; }).first;
            if (sigma_star_sq > 0)
                break;
            ++res.rejected;
        }
        if (attempt == kMaxAttempts)
            fail(ErrorCode::CalibrationDegenerate, "replicate ", l, " found no positive sigma*^2 in ", kMaxAttempts,
                 " resamples");
        std::normal_distribution<double> z(0.0, 1.0);
        res.z_star[l] = z(rng) * sigma / std::sqrt(sigma_star_sq);
    }
    if (2 * res.rejected > attempts_total)
        fail(ErrorCode::CalibrationDegenerate, res.rejected, " of ", attempts_total,
             " resamples had sigma*^2 <= 0; the theta grid is too small to calibrate");
    res.c_crit = upper_quantile_abs(res.z_star, 1.0 - alpha);
    return res;
}

} // namespace cvboot
