#pragma once

// Random splits, bootstrap weights, training-size adjustment for bootstrapped
// folds, and the effective-sample-size variance factor.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "cvboot/core.hpp"
#include "cvboot/rng.hpp"

namespace cvboot {

/// Expected fraction of distinct rows in a bootstrap sample, as the literature
/// prints it (1 - e^-1 rounded to three places).
inline constexpr double kDistinctFraction = 0.632;
inline constexpr double kDefaultSizePenalty = 1.0 - kDistinctFraction;

struct SplitConfig {
    Index m = 0;
    bool stratify_on_outcome = false;
    int max_redraws = 100;
};

namespace detail {

// Moves a uniformly random size-k subset of `pool` to its front.
inline void partial_shuffle(std::vector<Index>& pool, Index k, Rng& rng)
{
    for (Index i = 0; i < k; ++i) {
        std::uniform_int_distribution<Index> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
}

// Per-class train quotas that keep every class on both sides of the split.
inline std::vector<Index> stratum_quotas(const std::vector<Index>& class_sizes, Index n, Index m)
{
    const Index classes = class_sizes.size();
    std::vector<Index> quota(classes);
    std::vector<std::pair<double, Index>> remainder;
    Index assigned = 0;
    for (Index c = 0; c < classes; ++c) {
        const double exact = static_cast<double>(m) * static_cast<double>(class_sizes[c]) / static_cast<double>(n);
        quota[c] = static_cast<Index>(std::floor(exact));
        assigned += quota[c];
        remainder.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainder.begin(), remainder.end(), [](auto a, auto b) { return a.first > b.first; });
    for (Index r = 0; assigned < m; ++r, ++assigned)
        ++quota[remainder[r % classes].second];

    Index lo_total = 0;
    Index hi_total = 0;
    for (Index c = 0; c < classes; ++c) {
        if (class_sizes[c] < 2)
            fail(ErrorCode::InfeasibleStratification, "class ", c, " has ", class_sizes[c],
                 " members; need 2 to appear in both train and test");
        lo_total += 1;
        hi_total += class_sizes[c] - 1;
    }
    if (m < lo_total || m > hi_total)
        fail(ErrorCode::InfeasibleStratification, "training size ", m, " cannot keep every class in both folds (feasible ",
             lo_total, "..", hi_total, ")");

    for (Index c = 0; c < classes; ++c)
        quota[c] = std::clamp<Index>(quota[c], 1, class_sizes[c] - 1);
    Index total = 0;
    for (Index q : quota)
        total += q;
    // Rebalance after clamping; feasibility was checked above.
    for (Index c = 0; total < m; c = (c + 1) % classes)
        if (quota[c] < class_sizes[c] - 1) {
            ++quota[c];
            ++total;
        }
    for (Index c = 0; total > m; c = (c + 1) % classes)
        if (quota[c] > 1) {
            --quota[c];
            --total;
        }
    return quota;
}

} // namespace detail

/// Uniformly random size-m training set; the rest is the test set. With
/// stratification, class proportions are preserved and every class appears
/// in both folds.
inline SplitAssignment draw_split(const Dataset& data, const SplitConfig& cfg, Rng& rng)
{
    const Index n = data.n();
    if (cfg.m < 1 || cfg.m + 1 > n)
        fail(ErrorCode::InvalidArgument, "training size m=", cfg.m, " must be in [1, n-1] with n=", n);
    if (cfg.max_redraws < 0)
        fail(ErrorCode::InvalidArgument, "max_redraws must be >= 0");

    SplitAssignment s;
    if (!cfg.stratify_on_outcome) {
        std::vector<Index> pool(n);
        std::iota(pool.begin(), pool.end(), Index{0});
        detail::partial_shuffle(pool, cfg.m, rng);
        s.train.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.m));
        s.test.assign(pool.begin() + static_cast<std::ptrdiff_t>(cfg.m), pool.end());
    } else {
        if (data.kind != OutcomeKind::binary)
            fail(ErrorCode::InvalidArgument, "stratified splits need a binary outcome");
        std::map<double, std::vector<Index>> classes;
        for (Index i = 0; i < n; ++i)
            classes[data.y(i)].push_back(i);
        std::vector<Index> sizes;
        for (const auto& [value, members] : classes)
            sizes.push_back(members.size());
        const auto quota = detail::stratum_quotas(sizes, n, cfg.m);
        Index c = 0;
        for (auto& [value, members] : classes) {
            detail::partial_shuffle(members, quota[c], rng);
            s.train.insert(s.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(quota[c]));
            s.test.insert(s.test.end(), members.begin() + static_cast<std::ptrdiff_t>(quota[c]), members.end());
            ++c;
        }
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

/// Unstratified split over row count alone.
inline SplitAssignment draw_split(Index n, Index m, Rng& rng)
{
    if (m < 1 || m + 1 > n)
        fail(ErrorCode::InvalidArgument, "training size m=", m, " must be in [1, n-1] with n=", n);
    std::vector<Index> pool(n);
    std::iota(pool.begin(), pool.end(), Index{0});
    detail::partial_shuffle(pool, m, rng);
    SplitAssignment s;
    s.train.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    s.test.assign(pool.begin() + static_cast<std::ptrdiff_t>(m), pool.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

/// One Multinomial(n; 1/n, ..., 1/n) draw.
inline BootWeights draw_boot_weights(Index n, Rng& rng)
{
    if (n < 2)
        fail(ErrorCode::InvalidArgument, "bootstrap needs n >= 2, got ", n);
    BootWeights bw{std::vector<int>(n, 0)};
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (Index draw = 0; draw < n; ++draw)
        ++bw.w[pick(rng)];
    return bw;
}

/// Objective trading off the distinct-row count of a bootstrapped training
/// set against shrinkage of the test set.
inline double size_adjustment_loss(Index n, Index m, Index m_adj, double lambda0)
{
    const double effective = kDistinctFraction * static_cast<double>(m_adj) / static_cast<double>(m) - 1.0;
    const double test_shrink = static_cast<double>(n - m) / static_cast<double>(n - m_adj) - 1.0;
    return effective * effective + lambda0 * test_shrink * test_shrink;
}

/// Training size to use inside bootstrapped folds so that the distinct rows
/// seen in training are close to m. Exhaustive over integers in [m, n-1];
/// ties go to the smaller size.
inline Index solve_m_adj(Index n, Index m, double lambda0 = kDefaultSizePenalty)
{
    if (m < 1 || m + 1 > n)
        fail(ErrorCode::InvalidArgument, "m=", m, " must be in [1, n-1] with n=", n);
    if (!(lambda0 >= 0))
        fail(ErrorCode::InvalidArgument, "lambda0 must be >= 0");
    Index best = m;
    double best_loss = size_adjustment_loss(n, m, m, lambda0);
    for (Index cand = m + 1; cand + 1 <= n; ++cand) {
        const double loss = size_adjustment_loss(n, m, cand, lambda0);
        if (loss < best_loss) {
            best_loss = loss;
            best = cand;
        }
    }
    return best;
}

/// Variance correction for the reduced number of distinct training rows.
inline double adjustment_factor(Index n, Index m_adj)
{
    if (n < 1 || m_adj >= n)
        fail(ErrorCode::InvalidArgument, "m_adj=", m_adj, " must be < n=", n);
    return (static_cast<double>(n) - (1.0 - kDistinctFraction) * static_cast<double>(m_adj)) / static_cast<double>(n);
}

/// Train and test views of a split carrying the bootstrap multiplicities.
inline std::pair<WeightedView, WeightedView> weighted_fold(const Dataset& data, const SplitAssignment& split,
                                                           const BootWeights& weights)
{
    if (split.n() != data.n() || weights.n() != data.n())
        fail(ErrorCode::DimensionMismatch, "split covers ", split.n(), " rows, weights ", weights.n(), ", data ",
             data.n());
    auto side = [&](const std::vector<Index>& rows, const char* name) {
        std::vector<double> w(rows.size());
        double total = 0;
        for (Index j = 0; j < rows.size(); ++j) {
            w[j] = weights.w[rows[j]];
            total += w[j];
        }
        if (total <= 0)
            fail(ErrorCode::DegenerateFold, name, " fold has zero total bootstrap weight");
        return WeightedView(data, rows, std::move(w));
    };
    return {side(split.train, "train"), side(split.test, "test")};
}

} // namespace cvboot
