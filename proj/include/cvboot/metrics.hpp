#pragma once

// Performance functionals evaluated on a weighted test fold. Each takes the
// view plus one model score per view row (scores[j] belongs to view.row(j)),
// so the same code serves any learner. Weights act as row multiplicities.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvboot/core.hpp"

namespace cvboot {

namespace detail {

inline void check_scores(const WeightedView& test, std::span<const double> scores)
{
    if (scores.size() != test.size())
        fail(ErrorCode::DimensionMismatch, "got ", scores.size(), " scores for ", test.size(), " test rows");
}

} // namespace detail

/// Weighted mean absolute prediction error, sum w|y - s| / sum w.
inline double mape(const WeightedView& test, std::span<const double> scores)
{
    detail::check_scores(test, scores);
    double num = 0;
    double den = 0;
    for (Index j = 0; j < test.size(); ++j) {
        const double w = test.weight(j);
        num += w * std::abs(test.data().y(test.row(j)) - scores[j]);
        den += w;
    }
    if (!(den > 0))
        fail(ErrorCode::DegenerateFold, "test view has zero total weight");
    return num / den;
}

enum class TieRule {
    half,   // tied case/control pairs count 1/2
    strict, // tied pairs count 0
};

/// Weighted concordance between scores and a binary outcome: the share of
/// (control, case) pairs where the case scores higher. O(n log n).
inline double c_index(const WeightedView& test, std::span<const double> scores, TieRule ties = TieRule::half)
{
    detail::check_scores(test, scores);
    std::vector<Index> order(test.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] < scores[b]; });

    double w0_total = 0;
    double w1_total = 0;
    double concordant = 0;
    for (Index g = 0; g < order.size();) {
        Index e = g;
        double w0 = 0;
        double w1 = 0;
        for (; e < order.size() && scores[order[e]] == scores[order[g]]; ++e) {
            const Index j = order[e];
            const double y = test.data().y(test.row(j));
            if (y == 1.0)
                w1 += test.weight(j);
            else if (y == 0.0)
                w0 += test.weight(j);
            else
                fail(ErrorCode::NonBinaryOutcome, "c-index needs a 0/1 outcome, got ", y);
        }
        concordant += w1 * w0_total;
        if (ties == TieRule::half)
            concordant += 0.5 * w1 * w0;
        w0_total += w0;
        w1_total += w1;
        g = e;
    }
    if (!(w0_total > 0) || !(w1_total > 0))
        fail(ErrorCode::OneClassFold, "test view has only one outcome class");
    return concordant / (w0_total * w1_total);
}

enum class Subgroup { positive, nonpositive };

/// Treated-minus-control difference in weighted mean outcome among rows whose
/// score is above `cutoff` (positive side) or at or below it.
inline double subgroup_ate(const WeightedView& test, std::span<const double> scores, Subgroup side,
                           double cutoff = 0.0)
{
    detail::check_scores(test, scores);
    const Dataset& d = test.data();
    if (!d.has_treatment())
        fail(ErrorCode::MissingTreatment, "subgroup effect needs a treatment column");
    double sum[2] = {0, 0};
    double weight[2] = {0, 0};
    for (Index j = 0; j < test.size(); ++j) {
        const bool in = side == Subgroup::positive ? scores[j] > cutoff : scores[j] <= cutoff;
        if (!in)
            continue;
        const Index i = test.row(j);
        const int arm = d.g(i) == 1.0 ? 1 : 0;
        sum[arm] += test.weight(j) * d.y(i);
        weight[arm] += test.weight(j);
    }
    if (!(weight[0] > 0) || !(weight[1] > 0))
        fail(ErrorCode::EmptySubgroupArm, side == Subgroup::positive ? "positive" : "nonpositive",
             " subgroup lacks a ", weight[1] > 0 ? "control" : "treated", " arm");
    return sum[1] / weight[1] - sum[0] / weight[0];
}

/// Weighted median of the scores (lower median on ties of cumulative weight).
inline double weighted_median(const WeightedView& view, std::span<const double> scores)
{
    detail::check_scores(view, scores);
    std::vector<Index> order(view.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] < scores[b]; });
    const double half = 0.5 * view.total_weight();
    double acc = 0;
    for (Index j : order) {
        acc += view.weight(j);
        if (acc >= half && view.weight(j) > 0)
            return scores[j];
    }
    fail(ErrorCode::DegenerateFold, "median of an empty view");
}

struct RocCurve {
    std::vector<double> grid;        // false-positive levels u in (0,1)
    std::vector<double> sensitivity; // ROC(u)
    double auc = 0;                  // trapezoid over {0, grid, 1}
    double auc_exact = 0;            // pairwise concordance, ties 1/2
};

inline std::vector<double> default_roc_grid()
{
    std::vector<double> g;
    for (int i = 1; i <= 19; ++i)
        g.push_back(0.05 * i);
    return g;
}

namespace detail {

// Weighted empirical survival functions of the scores within each class, and
// ROC(u) = S1(S0^{-1}(u)) with S0^{-1}(u) = inf{t : S0(t) <= u}.
class RocEvaluator {
public:
    RocEvaluator(std::span<const double> scores, std::span<const double> outcome, std::span<const double> weights)
    {
        for (Index i = 0; i < scores.size(); ++i) {
            const double w = weights.empty() ? 1.0 : weights[i];
            if (!(w > 0))
                continue;
            if (outcome[i] == 1.0)
                cases_.push_back({scores[i], w});
            else if (outcome[i] == 0.0)
                controls_.push_back({scores[i], w});
            else
                fail(ErrorCode::NonBinaryOutcome, "ROC needs a 0/1 outcome, got ", outcome[i]);
        }
        if (cases_.empty() || controls_.empty())
            fail(ErrorCode::OneClass, "ROC needs both outcome classes");
        auto by_score_desc = [](const Point& a, const Point& b) { return a.s > b.s; };
        std::sort(cases_.begin(), cases_.end(), by_score_desc);
        std::sort(controls_.begin(), controls_.end(), by_score_desc);
        w0_ = 0;
        for (const auto& c : controls_)
            w0_ += c.w;
        w1_ = 0;
        for (const auto& c : cases_)
            w1_ += c.w;
    }

    double at(double u) const
    {
        if (u >= 1.0)
            return 1.0;
        // Walk controls from the top; S0 at a control score s is the weight
        // strictly above s. The threshold is the lowest s with S0(s) <= u.
        const double budget = u * w0_ * (1.0 + 1e-12);
        double above = 0;
        double threshold = controls_.front().s;
        for (Index i = 0; i < controls_.size();) {
            Index e = i;
            double tied = 0;
            for (; e < controls_.size() && controls_[e].s == controls_[i].s; ++e)
                tied += controls_[e].w;
            if (above > budget)
                break;
            threshold = controls_[i].s;
            above += tied;
            i = e;
        }
        double cases_above = 0;
        for (const auto& c : cases_) {
            if (!(c.s > threshold))
                break;
            cases_above += c.w;
        }
        return cases_above / w1_;
    }

    double pairwise_auc() const
    {
        double num = 0;
        for (const auto& c : cases_)
            for (const auto& k : controls_)
                num += c.w * k.w * (c.s > k.s ? 1.0 : c.s == k.s ? 0.5 : 0.0);
        return num / (w0_ * w1_);
    }

private:
    struct Point {
        double s;
        double w;
    };
    std::vector<Point> cases_;
    std::vector<Point> controls_;
    double w0_ = 0;
    double w1_ = 0;
};

} // namespace detail

/// ROC curve of full-sample (pre-validated) risk scores on a grid of
/// false-positive levels. `weights` may be empty (unit weights).
inline RocCurve roc_prevalidated(std::span<const double> scores, std::span<const double> outcome,
                                 std::vector<double> grid = default_roc_grid(), std::span<const double> weights = {})
{
    if (scores.size() != outcome.size() || (!weights.empty() && weights.size() != scores.size()))
        fail(ErrorCode::DimensionMismatch, "scores, outcome and weights differ in length");
    for (double u : grid)
        if (!(u > 0 && u < 1))
            fail(ErrorCode::InvalidArgument, "ROC grid levels must lie in (0,1), got ", u);
    std::sort(grid.begin(), grid.end());
    detail::RocEvaluator roc(scores, outcome, weights);
    RocCurve out;
    out.grid = grid;
    out.sensitivity.reserve(grid.size());
    for (double u : grid)
        out.sensitivity.push_back(roc.at(u));

    double prev_u = 0;
    double prev_v = roc.at(0.0);
    for (Index i = 0; i <= grid.size(); ++i) {
        const double u = i < grid.size() ? grid[i] : 1.0;
        const double v = i < grid.size() ? out.sensitivity[i] : 1.0;
        out.auc += 0.5 * (u - prev_u) * (v + prev_v);
        prev_u = u;
        prev_v = v;
    }
    out.auc_exact = roc.pairwise_auc();
    return out;
}

/// Named scalar metrics for runtime configuration.
enum class Metric { mape, c_index, c_index_strict, ate_positive, ate_nonpositive };

inline std::string_view to_string(Metric m)
{
    switch (m) {
    case Metric::mape: return "mape";
    case Metric::c_index: return "cindex";
    case Metric::c_index_strict: return "cindex_strict";
    case Metric::ate_positive: return "ate_pos";
    case Metric::ate_nonpositive: return "ate_nonpos";
    }
    return "?";
}

inline Metric parse_metric(std::string_view s)
{
    for (auto m : {Metric::mape, Metric::c_index, Metric::c_index_strict, Metric::ate_positive,
                   Metric::ate_nonpositive})
        if (to_string(m) == s)
            return m;
    fail(ErrorCode::InvalidArgument, "unknown metric '", std::string(s), "'");
}

enum class CutoffRule {
    fixed,  // score compared against `cutoff`
    median, // score compared against the weighted median of the evaluated fold
};

/// Evaluator object for the engine: (test view, scores) -> real.
struct MetricEvaluator {
    Metric metric = Metric::mape;
    double cutoff = 0.0;
    CutoffRule cutoff_rule = CutoffRule::fixed;

    double operator()(const WeightedView& test, std::span<const double> scores) const
    {
        switch (metric) {
        case Metric::mape: return mape(test, scores);
        case Metric::c_index: return c_index(test, scores, TieRule::half);
        case Metric::c_index_strict: return c_index(test, scores, TieRule::strict);
        case Metric::ate_positive:
        case Metric::ate_nonpositive: {
            const double c = cutoff_rule == CutoffRule::median ? weighted_median(test, scores) : cutoff;
            return subgroup_ate(test, scores,
                                metric == Metric::ate_positive ? Subgroup::positive : Subgroup::nonpositive, c);
        }
        }
        fail(ErrorCode::InvalidArgument, "unknown metric");
    }
};

} // namespace cvboot
