#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "cvboot/core.hpp"

using namespace cvboot;

namespace {

Dataset small(Index n, Index p)
{
    Dataset d;
    d.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    d.outcome = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Index i = 0; i < n; ++i) {
        d.features(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
        d.outcome[static_cast<Eigen::Index>(i)] = static_cast<double>(i % 2);
    }
    return d;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

} // namespace

TEST_CASE("validate fills ids and checks shapes")
{
    auto d = validate(small(4, 2));
    REQUIRE(d.ids.size() == 4);
    CHECK(d.ids[3] == "3");

    auto bad = small(4, 2);
    bad.outcome.resize(3);
    CHECK(code_of([&] { validate(bad); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("binary outcome must be 0/1")
{
    auto d = small(4, 1);
    d.kind = OutcomeKind::binary;
    CHECK_NOTHROW(validate(d));
    d.outcome[2] = 2.0;
    CHECK(code_of([&] { validate(d); }) == ErrorCode::NonBinaryOutcome);
}

TEST_CASE("treatment needs both arms")
{
    auto d = small(4, 1);
    d.treatment = Eigen::VectorXd::Ones(4);
    CHECK(code_of([&] { validate(d); }) == ErrorCode::EmptyArm);
    (*d.treatment)[0] = 0;
    CHECK_NOTHROW(validate(d));
}

TEST_CASE("subset copies rows with repetition and keeps source ids")
{
    auto d = validate(small(5, 2));
    const std::vector<Index> rows{4, 1, 1};
    auto s = d.subset(rows);
    REQUIRE(s.n() == 3);
    CHECK(s.features(0, 0) == 4.0);
    CHECK(s.features(2, 0) == 1.0);
    CHECK(s.ids == std::vector<std::string>{"4", "1", "1"});
}

TEST_CASE("weighted view expansion repeats each row weight times")
{
    auto d = validate(small(4, 1));
    WeightedView v(d, {0, 2, 3}, {2, 0, 1});
    CHECK(v.total_weight() == 3.0);
    CHECK(v.positive_count() == 2);
    CHECK(v.outcome_weight(0.0) == 2.0);
    auto e = v.expand();
    REQUIRE(e.n() == 3);
    CHECK(e.features(0, 0) == 0.0);
    CHECK(e.features(1, 0) == 0.0);
    CHECK(e.features(2, 0) == 3.0);

    CHECK_THROWS_AS(WeightedView(d, {0, 1}, {1.0}), Error);
}

TEST_CASE("split assignment partition check")
{
    SplitAssignment s{{0, 2}, {1, 3}};
    CHECK(s.is_partition());
    SplitAssignment overlap{{0, 1}, {1, 3}};
    CHECK_FALSE(overlap.is_partition());
}

TEST_CASE("theta grid drops rows missing more than a fifth of their cells")
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Eigen::MatrixXd g(3, 5);
    g << 1, 2, 3, 4, 5,      // complete
        1, nan, 3, 4, 5,     // 1/5 missing: kept
        nan, nan, 3, 4, 5;   // 2/5 missing: dropped
    auto t = ThetaMatrix::from_grid(g);
    CHECK(t.b_boot() == 2);
    CHECK(t.b_cv() == 5);
    CHECK(t.dropped_rows() == 1);
    CHECK(t.missing_cells() == 3);
    CHECK_FALSE(t.balanced());
    CHECK(t.rows()[1].size() == 4);
}

TEST_CASE("balanced theta round-trips through dense and resamples rows")
{
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    ThetaMatrix t(m);
    CHECK(t.balanced());
    CHECK(t.dense() == m);
    const std::vector<Index> picks{1, 1};
    auto r = t.resample_rows(picks);
    CHECK(r.rows()[0] == std::vector<double>{4, 5, 6});
    CHECK(r.b_boot() == 2);

    m(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ThetaMatrix(m), Error);
}

TEST_CASE("interval and budget helpers")
{
    Interval iv{-1, 2};
    CHECK(iv.contains(2.0));
    CHECK_FALSE(iv.contains(2.5));
    CHECK(iv.width() == 3.0);
    FitBudget b{400, 8000, 7};
    CHECK(b.total() == 8407);
}
