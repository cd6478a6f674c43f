#pragma once

// Shared data model: datasets, splits, bootstrap weights, weighted fold
// views, the bootstrap-by-split performance grid and inference reports.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvboot/error.hpp"

namespace cvboot {

using Index = std::size_t;

enum class OutcomeKind { continuous, binary };

/// One observed sample: covariates Z (n x p), outcome Y, and an optional
/// binary treatment arm G. Row identifiers survive resampling so reports can
/// point back at source rows.
struct Dataset {
    Eigen::MatrixXd features;
    Eigen::VectorXd outcome;
    std::optional<Eigen::VectorXd> treatment;
    std::vector<std::string> ids;
    OutcomeKind kind = OutcomeKind::continuous;

    Index n() const noexcept { return static_cast<Index>(outcome.size()); }
    Index p() const noexcept { return static_cast<Index>(features.cols()); }
    bool has_treatment() const noexcept { return treatment.has_value(); }

    double y(Index i) const { return outcome[static_cast<Eigen::Index>(i)]; }
    double g(Index i) const { return (*treatment)[static_cast<Eigen::Index>(i)]; }
    auto z(Index i) const { return features.row(static_cast<Eigen::Index>(i)); }

    /// Concrete copy of the given rows (duplicates allowed).
    Dataset subset(std::span<const Index> rows) const
    {
        Dataset out;
        const auto m = static_cast<Eigen::Index>(rows.size());
        out.features.resize(m, features.cols());
        out.outcome.resize(m);
        if (treatment)
            out.treatment = Eigen::VectorXd(m);
        out.ids.reserve(rows.size());
        for (Eigen::Index r = 0; r < m; ++r) {
            const auto src = static_cast<Eigen::Index>(rows[static_cast<Index>(r)]);
            out.features.row(r) = features.row(src);
            out.outcome[r] = outcome[src];
            if (treatment)
                (*out.treatment)[r] = (*treatment)[src];
            out.ids.push_back(ids.empty() ? std::to_string(src) : ids[static_cast<Index>(src)]);
        }
        out.kind = kind;
        return out;
    }
};

inline bool is_binary_value(double v) noexcept { return v == 0.0 || v == 1.0; }

/// Checks the dataset invariants and fills default row ids.
inline Dataset validate(Dataset d)
{
    const auto n = d.outcome.size();
    if (d.features.rows() != n)
        fail(ErrorCode::DimensionMismatch, "features have ", d.features.rows(), " rows but outcome has ", n);
    if (n < 2)
        fail(ErrorCode::DimensionMismatch, "need at least 2 rows, got ", n);
    if (d.features.cols() < 1)
        fail(ErrorCode::DimensionMismatch, "need at least one feature column");
    if (!d.ids.empty() && static_cast<Eigen::Index>(d.ids.size()) != n)
        fail(ErrorCode::DimensionMismatch, "ids has ", d.ids.size(), " entries for ", n, " rows");
    if (!d.features.allFinite() || !d.outcome.allFinite())
        fail(ErrorCode::InvalidArgument, "non-finite value in features or outcome");
    if (d.kind == OutcomeKind::binary) {
        for (Eigen::Index i = 0; i < n; ++i)
            if (!is_binary_value(d.outcome[i]))
                fail(ErrorCode::NonBinaryOutcome, "row ", i, " has outcome ", d.outcome[i]);
    }
    if (d.treatment) {
        if (d.treatment->size() != n)
            fail(ErrorCode::DimensionMismatch, "treatment length ", d.treatment->size(), " != ", n);
        Eigen::Index treated = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double g = (*d.treatment)[i];
            if (!is_binary_value(g))
                fail(ErrorCode::InvalidArgument, "row ", i, " has treatment ", g, " (expected 0/1)");
            treated += g == 1.0;
        }
        if (treated == 0 || treated == n)
            fail(ErrorCode::EmptyArm, treated == 0 ? "no treated rows" : "no control rows");
    }
    if (d.ids.empty()) {
        d.ids.reserve(static_cast<Index>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            d.ids.push_back(std::to_string(i));
    }
    return d;
}

/// Disjoint train/test partition of {0..n-1}.
struct SplitAssignment {
    std::vector<Index> train;
    std::vector<Index> test;

    Index n() const noexcept { return train.size() + test.size(); }

    bool is_partition() const
    {
        std::vector<char> seen(n(), 0);
        for (auto idx : {std::span<const Index>(train), std::span<const Index>(test)})
            for (Index i : idx) {
                if (i >= seen.size() || seen[i])
                    return false;
                seen[i] = 1;
            }
        return true;
    }
};

/// Multinomial(n; 1/n,...,1/n) multiplicities realising one bootstrap sample.
struct BootWeights {
    std::vector<int> w;

    Index n() const noexcept { return w.size(); }
    long total() const { return std::accumulate(w.begin(), w.end(), 0L); }
    static BootWeights unit(Index n) { return BootWeights{std::vector<int>(n, 1)}; }
};

/// A set of dataset rows with nonnegative frequency weights. Rows of weight
/// zero stay in the view; every learner and metric treats a weight-w row as w
/// copies. The view borrows the dataset, which must outlive it.
class WeightedView {
public:
    WeightedView(const Dataset& data, std::vector<Index> rows, std::vector<double> weights)
        : data_(&data), rows_(std::move(rows)), weights_(std::move(weights))
    {
        if (rows_.size() != weights_.size())
            fail(ErrorCode::DimensionMismatch, "view has ", rows_.size(), " rows and ", weights_.size(), " weights");
    }

    static WeightedView unit(const Dataset& data, std::vector<Index> rows)
    {
        std::vector<double> w(rows.size(), 1.0);
        return WeightedView(data, std::move(rows), std::move(w));
    }

    static WeightedView all(const Dataset& data)
    {
        std::vector<Index> rows(data.n());
        std::iota(rows.begin(), rows.end(), Index{0});
        return unit(data, std::move(rows));
    }

    const Dataset& data() const noexcept { return *data_; }
    std::span<const Index> rows() const noexcept { return rows_; }
    std::span<const double> weights() const noexcept { return weights_; }
    Index size() const noexcept { return rows_.size(); }
    Index row(Index j) const { return rows_[j]; }
    double weight(Index j) const { return weights_[j]; }

    double total_weight() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

    Index positive_count() const
    {
        return static_cast<Index>(std::count_if(weights_.begin(), weights_.end(), [](double w) { return w > 0; }));
    }

    /// Total weight of rows whose outcome equals `value`.
    double outcome_weight(double value) const
    {
        double s = 0;
        for (Index j = 0; j < size(); ++j)
            if (data_->y(rows_[j]) == value)
                s += weights_[j];
        return s;
    }

    /// Row-expanded copy: each row repeated weight times. Test helper and
    /// naive-bootstrap building block.
    Dataset expand() const
    {
        std::vector<Index> rows;
        for (Index j = 0; j < size(); ++j)
            for (int c = 0; c < static_cast<int>(weights_[j]); ++c)
                rows.push_back(rows_[j]);
        return data_->subset(rows);
    }

private:
    const Dataset* data_;
    std::vector<Index> rows_;
    std::vector<double> weights_;
};

/// Bootstrap-by-split grid of cross-validation performance values. Rows are
/// bootstraps; a row may hold fewer than b_cv() cells when some splits failed.
class ThetaMatrix {
public:
    ThetaMatrix() = default;

    /// Balanced matrix; every entry must be finite.
    explicit ThetaMatrix(const Eigen::MatrixXd& values) : b_cv_(static_cast<Index>(values.cols()))
    {
        if (!values.allFinite())
            fail(ErrorCode::InvalidArgument, "theta matrix has non-finite entries");
        rows_.reserve(static_cast<Index>(values.rows()));
        for (Eigen::Index b = 0; b < values.rows(); ++b) {
            std::vector<double> row(static_cast<Index>(values.cols()));
            for (Eigen::Index k = 0; k < values.cols(); ++k)
                row[static_cast<Index>(k)] = values(b, k);
            rows_.push_back(std::move(row));
        }
    }

    ThetaMatrix(std::vector<std::vector<double>> rows, Index b_cv) : rows_(std::move(rows)), b_cv_(b_cv)
    {
        for (const auto& r : rows_)
            for (double v : r)
                if (!std::isfinite(v))
                    fail(ErrorCode::InvalidArgument, "theta matrix has non-finite entries");
    }

    /// Builds from a raw grid where NaN marks a missing cell. A row missing
    /// more than `max_missing_fraction` of its cells (or left with fewer than
    /// two) is dropped whole; other rows keep their available cells.
    static ThetaMatrix from_grid(const Eigen::MatrixXd& grid, double max_missing_fraction = 0.2)
    {
        std::vector<std::vector<double>> rows;
        Index dropped = 0;
        Index missing = 0;
        const auto cols = static_cast<Index>(grid.cols());
        for (Eigen::Index b = 0; b < grid.rows(); ++b) {
            std::vector<double> row;
            for (Eigen::Index k = 0; k < grid.cols(); ++k)
                if (std::isfinite(grid(b, k)))
                    row.push_back(grid(b, k));
            const Index miss = cols - row.size();
            missing += miss;
            if (static_cast<double>(miss) > max_missing_fraction * static_cast<double>(cols) || row.size() < 2) {
                ++dropped;
                continue;
            }
            rows.push_back(std::move(row));
        }
        ThetaMatrix out(std::move(rows), cols);
        out.dropped_rows_ = dropped;
        out.missing_cells_ = missing;
        return out;
    }

    Index b_boot() const noexcept { return rows_.size(); }
    Index b_cv() const noexcept { return b_cv_; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
    Index dropped_rows() const noexcept { return dropped_rows_; }
    Index missing_cells() const noexcept { return missing_cells_; }

    bool balanced() const
    {
        return std::all_of(rows_.begin(), rows_.end(), [&](const auto& r) { return r.size() == b_cv_; });
    }

    /// New matrix made of the given rows (with repetition).
    ThetaMatrix resample_rows(std::span<const Index> picks) const
    {
        ThetaMatrix out;
        out.b_cv_ = b_cv_;
        out.rows_.reserve(picks.size());
        for (Index b : picks)
            out.rows_.push_back(rows_[b]);
        return out;
    }

    /// Balanced view as a dense matrix; requires balanced().
    Eigen::MatrixXd dense() const
    {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(b_boot()), static_cast<Eigen::Index>(b_cv_));
        for (Index b = 0; b < b_boot(); ++b)
            for (Index k = 0; k < b_cv_; ++k)
                out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k)) = rows_[b].at(k);
        return out;
    }

private:
    std::vector<std::vector<double>> rows_;
    Index b_cv_ = 0;
    Index dropped_rows_ = 0;
    Index missing_cells_ = 0;
};

/// Random-effects decomposition of a ThetaMatrix. Units are the metric's
/// units squared; adj_factor is dimensionless.
struct VarianceComponents {
    double sigma_bt_sq = 0;     // between-bootstrap, clamped at zero
    double tau0_sq = 0;         // within-bootstrap (split-to-split)
    double sigma_bt_sq_raw = 0; // unclamped moment estimate, may be negative
    double adj_factor = 1;      // (n - 0.368 m_adj) / n
};

struct Interval {
    double lo = 0;
    double hi = 0;

    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

/// Model-training counts spent on one inference run.
struct FitBudget {
    Index point = 0;     // unit-weight splits for the point estimate
    Index bootstrap = 0; // B_BOOT * B_CV grid cells
    Index redraws = 0;   // extra fits spent replacing degenerate folds

    Index total() const noexcept { return point + bootstrap + redraws; }
};

struct InferenceReport {
    double point = 0;  // cross-validation estimate at training size m
    double se = 0;     // sigma_BT
    double se_adj = 0; // sigma_BT * sqrt(adj_factor)
    Interval ci_normal;
    Interval ci_adj;
    std::optional<Interval> ci_calibrated;     // c_crit * se
    std::optional<Interval> ci_calibrated_adj; // c_crit * se_adj
    std::optional<double> c_crit;
    double z_crit = 0;
    Index m = 0;
    Index m_adj = 0;
    Index n = 0;
    double alpha = 0.05;
    VarianceComponents components;
    Index b_boot = 0;
    Index b_cv = 0;
    Index b_cv_point = 0;
    FitBudget fits;
    Index fits_used = 0;
    Index missing_cells = 0;
    Index dropped_rows = 0;
    bool sigma_clamped = false;
};

} // namespace cvboot
