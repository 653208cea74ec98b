#include "garima/series.hpp"
#include "garima/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace garima {
namespace {

TimeSeries make(std::vector<double> v) { return TimeSeries(std::span<const double>(v)); }

std::vector<double> to_vec(const TimeSeries& s) { return {s.values().data(), s.values().data() + s.size()}; }

TEST(TimeSeries, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(make({}), Error);
    EXPECT_THROW(make({1.0, std::numeric_limits<double>::quiet_NaN()}), Error);
    EXPECT_THROW(make({std::numeric_limits<double>::infinity()}), Error);
    try {
        make({});
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadInput);
    }
}

TEST(ModelOrder, RejectsEmptyModel) {
    EXPECT_THROW((ModelOrder{0, 0, 0}.validate()), Error);
    EXPECT_THROW((ModelOrder{-1, 0, 1}.validate()), Error);
    EXPECT_NO_THROW((ModelOrder{0, 0, 1}.validate()));
}

TEST(Difference, Examples) {
    EXPECT_EQ(to_vec(difference(make({1, 2, 3}), 0)), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(to_vec(difference(make({1, 3, 6, 10}), 1)), (std::vector<double>{2, 3, 4}));
    EXPECT_EQ(to_vec(difference(make({1, 3, 6, 10}), 2)), (std::vector<double>{1, 1}));
}

TEST(Difference, InsufficientData) {
    try {
        difference(make({1, 2}), 2);
        FAIL() << "expected InsufficientData";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(Difference, RepeatedFirstDifferencesEqualHigherOrder) {
    const TimeSeries s = generate({GeneratorKind::TrendAr, 120, 3});
    const auto twice = difference(difference(s, 1), 1);
    const auto once = difference(s, 2);
    ASSERT_EQ(twice.size(), once.size());
    EXPECT_EQ(twice.values(), once.values());
}

TEST(Undifference, Examples) {
    const std::vector<double> heads{1};
    EXPECT_EQ(to_vec(undifference(make({2, 3, 4}), 1, heads)), (std::vector<double>{1, 3, 6, 10}));
    EXPECT_EQ(to_vec(undifference(make({7.5}), 0, {})), (std::vector<double>{7.5}));
}

TEST(Undifference, SeedCountMismatch) {
    const std::vector<double> heads{1, 2};
    try {
        undifference(make({1, 2, 3}), 1, heads);
        FAIL() << "expected BadSeedValues";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadSeedValues);
    }
}

TEST(Undifference, RoundTripGeneratedSeriesOrderTwo) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 300, 11});
    const std::vector<double> heads{s[0], s[1]};
    const TimeSeries back = undifference(difference(s, 2), 2, heads);
    ASSERT_EQ(back.size(), s.size());
    EXPECT_LE((back.values() - s.values()).cwiseAbs().maxCoeff(), 1e-12);
}

Vector random_series(std::mt19937_64& rng, int n, double scale) {
    std::normal_distribution<double> value(0.0, scale);
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = value(rng);
    }
    return v;
}

double round_trip_error(const Vector& v, int d) {
    const TimeSeries s(v);
    const TimeSeries diffed = difference(s, d);
    EXPECT_EQ(diffed.size(), s.size() - static_cast<std::size_t>(d));
    const std::vector<double> heads(v.data(), v.data() + d);
    return (undifference(diffed, d, heads).values() - v).cwiseAbs().maxCoeff();
}

// Property: round trip to 1e-12 absolute on unit-scale series. Third
// differences are covered by the floating-point bound below; their rounding
// alone can exceed 1e-12 after triple integration.
TEST(Undifference, RoundTripProperty) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> length(4, 50);
    for (int trial = 0; trial < 500; ++trial) {
        const Vector v = random_series(rng, length(rng), 1.0);
        for (int d = 0; d <= 2; ++d) {
            ASSERT_LE(round_trip_error(v, d), 1e-12) << "trial " << trial << " d " << d;
        }
    }
}

// Long, larger-scale series: rounding in the stored d-th differences is
// integrated d times on the way back, so the attainable error grows like
// eps * n^(d-1/2) * |diff|. Even exact rational reconstruction from the
// rounded differences reaches ~2e-10 at n = 200, d = 3.
TEST(Undifference, RoundTripWithinFloatingPointBound) {
    std::mt19937_64 rng(2025);
    std::uniform_int_distribution<int> length(4, 200);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = length(rng);
        const Vector v = random_series(rng, n, 5.0);
        for (int d = 0; d <= 3; ++d) {
            const double scale = difference(TimeSeries(v), d).values().cwiseAbs().maxCoeff() + v.cwiseAbs().maxCoeff();
            const double bound = 4 * std::numeric_limits<double>::epsilon() * std::pow(n, d) * scale;
            ASSERT_LE(round_trip_error(v, d), std::max(1e-12, bound)) << "trial " << trial << " d " << d;
        }
    }
}

TEST(LagMatrix, Example) {
    const LagMatrix lags = build_lag_matrix(make({1, 2, 3, 4}), 2);
    ASSERT_EQ(lags.rows.rows(), 2);
    ASSERT_EQ(lags.rows.cols(), 2);
    EXPECT_EQ(lags.rows(0, 0), 2);
    EXPECT_EQ(lags.rows(0, 1), 1);
    EXPECT_EQ(lags.rows(1, 0), 3);
    EXPECT_EQ(lags.rows(1, 1), 2);
    EXPECT_EQ(lags.targets(0), 3);
    EXPECT_EQ(lags.targets(1), 4);
    EXPECT_EQ(lags.t_index, (std::vector<std::size_t>{2, 3}));
}

TEST(LagMatrix, DegenerateLength) {
    try {
        build_lag_matrix(make({5}), 1);
        FAIL() << "expected InsufficientData";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(LagMatrix, ExhaustiveIndexCheckOnNoisyArma) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 300, 42});
    const int p = 5;
    const LagMatrix lags = build_lag_matrix(s, p);
    ASSERT_EQ(lags.size(), 295u);
    for (std::size_t r = 0; r < lags.size(); ++r) {
        const std::size_t t = lags.t_index[r];
        ASSERT_EQ(t, r + p);
        ASSERT_EQ(lags.targets(static_cast<Eigen::Index>(r)), s[t]);
        for (int i = 0; i < p; ++i) {
            ASSERT_EQ(lags.rows(static_cast<Eigen::Index>(r), i), s[t - static_cast<std::size_t>(i) - 1]);
        }
    }
}

TEST(IntegrateForecast, MatchesUndifferencing) {
    const TimeSeries s = generate({GeneratorKind::TrendAr, 60, 5});
    for (int d = 0; d <= 3; ++d) {
        const TimeSeries diffed = difference(s, d);
        const double next_diff = 0.37;
        std::vector<double> extended(diffed.values().data(), diffed.values().data() + diffed.size());
        extended.push_back(next_diff);
        const std::vector<double> heads(s.values().data(), s.values().data() + d);
        const TimeSeries rebuilt = undifference(TimeSeries(std::span<const double>(extended)), d, heads);
        EXPECT_NEAR(integrate_forecast(s, d, next_diff), rebuilt[rebuilt.size() - 1], 1e-10) << "d " << d;
    }
}

}  // namespace
}  // namespace garima
