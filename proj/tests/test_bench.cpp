#include "garima/bench.hpp"
#include "garima/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace garima {
namespace {

TimeSeries from(const std::vector<double>& v) { return TimeSeries(std::span<const double>(v)); }

BenchConfig small_config() {
    BenchConfig config;
    config.window = 60;
    config.horizon = 20;
    config.replications = 2;
    config.series_length = 80;
    config.threads = 1;
    return config;
}

TEST(Metrics, Examples) {
    const std::vector<double> a{1, -1};
    EXPECT_EQ(mae(a), 1.0);
    EXPECT_EQ(rmse(a), 1.0);
    const std::vector<double> b{3, 4};
    EXPECT_EQ(mae(b), 3.5);
    EXPECT_NEAR(rmse(b), 3.5355339059327378, 1e-15);
    const std::vector<double> z(7, 0.0);
    EXPECT_EQ(mae(z), 0.0);
    EXPECT_EQ(rmse(z), 0.0);
}

TEST(Metrics, EmptyInput) {
    const std::vector<double> empty;
    EXPECT_THROW(mae(empty), Error);
    EXPECT_THROW(rmse(empty), Error);
}

TEST(RollingForecast, ConstantSeries) {
    const TimeSeries s = from(std::vector<double>(260, 4.5));
    BenchConfig config;
    for (const auto algorithm : {Algorithm::ArimaCss, Algorithm::Galerkin}) {
        for (const ModelOrder order : {ModelOrder{1, 0, 0}, ModelOrder{0, 0, 1}, ModelOrder{5, 0, 1}}) {
            const ForecastTrace trace = rolling_forecast(s, algorithm, order, config);
            ASSERT_EQ(trace.steps.size(), 150u);
            const auto errors = trace.errors();
            EXPECT_LE(mae(errors), 1e-6) << algorithm_name(algorithm) << " p " << order.p << " q " << order.q;
            for (const auto& step : trace.steps) {
                EXPECT_NEAR(step.forecast, 4.5, 1e-6);
            }
        }
    }
}

TEST(RollingForecast, NoiselessSpanRecovery) {
    std::vector<double> y{1.0};
    for (int i = 1; i < 250; ++i) {
        y.push_back(0.6 * y.back());
    }
    const ForecastTrace trace = rolling_forecast(from(y), Algorithm::Galerkin, {1, 0, 0}, BenchConfig{});
    for (const auto& step : trace.steps) {
        EXPECT_LE(std::abs(step.truth - step.forecast), 1e-6);
        EXPECT_FALSE(step.fallback);
    }
}

TEST(RollingForecast, TooShortSeriesFailsUpFront) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 249, 1});
    try {
        rolling_forecast(s, Algorithm::Galerkin, {1, 0, 0}, BenchConfig{});
        FAIL() << "expected BadInput";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadInput);
    }
}

TEST(RollingForecast, IndicesAndTruth) {
    const TimeSeries s = generate({GeneratorKind::Seasonal, 80, 2});
    const ForecastTrace trace = rolling_forecast(s, Algorithm::Galerkin, {1, 0, 1}, small_config());
    ASSERT_EQ(trace.steps.size(), 20u);
    for (std::size_t k = 0; k < 20; ++k) {
        EXPECT_EQ(trace.steps[k].t_index, 60 + k);
        EXPECT_EQ(trace.steps[k].truth, s[60 + k]);
    }
    EXPECT_GT(trace.total_seconds, 0.0);
}

TEST(RollingForecast, NoLookAhead) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 80, 3});
    for (const auto algorithm : {Algorithm::ArimaCss, Algorithm::Galerkin}) {
        const ForecastTrace clean = rolling_forecast(s, algorithm, {1, 0, 1}, small_config());
        for (std::size_t i : {60u, 67u, 79u}) {
            std::vector<double> corrupted(s.values().data(), s.values().data() + s.size());
            corrupted[i] += 1e3;
            const ForecastTrace dirty = rolling_forecast(from(corrupted), algorithm, {1, 0, 1}, small_config());
            EXPECT_EQ(dirty.steps[i - 60].forecast, clean.steps[i - 60].forecast) << algorithm_name(algorithm);
            // Everything up to and including step i is unchanged.
            for (std::size_t k = 0; k <= i - 60; ++k) {
                ASSERT_EQ(dirty.steps[k].forecast, clean.steps[k].forecast);
            }
        }
    }
}

TEST(RollingForecast, FailedFitsFallBackToWindowMean) {
    BenchConfig config = small_config();
    config.window = 12;  // too short for p = 5 with the squared basis
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 80, 3});
    const ForecastTrace trace = rolling_forecast(s, Algorithm::Galerkin, {5, 0, 0}, config);
    ASSERT_EQ(trace.steps.size(), 20u);
    EXPECT_EQ(trace.fallback_count, 20u);
    for (const auto& step : trace.steps) {
        EXPECT_TRUE(step.fallback);
        EXPECT_NEAR(step.forecast, s.values().segment(static_cast<Eigen::Index>(step.t_index) - 12, 12).mean(),
                    1e-12);
    }
}

TEST(RunBench, SingleCellShape) {
    BenchConfig config;
    config.replications = 1;
    config.horizon = 1;
    config.datasets = {GeneratorKind::TrendAr};
    config.order_pairs = {{1, 0}};
    const BenchReport report = run_bench(config);
    ASSERT_EQ(report.rows.size(), 2u);
    EXPECT_EQ(report.rows[0].algorithm, "arima_css");
    EXPECT_EQ(report.rows[1].algorithm, "galerkin");
    EXPECT_EQ(report.rows[0].dataset, "Trend_AR");
}

TEST(RunBench, DeterministicMetricsAndRowInvariants) {
    BenchConfig config = small_config();
    config.order_pairs = {{1, 0}, {0, 1}, {1, 5}};
    const BenchReport a = run_bench(config);
    config.threads = 3;
    const BenchReport b = run_bench(config);
    ASSERT_EQ(a.rows.size(), 4u * 3u * 2u);
    ASSERT_EQ(b.rows.size(), a.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const BenchRow& x = a.rows[i];
        const BenchRow& y = b.rows[i];
        EXPECT_EQ(x.dataset, y.dataset);
        EXPECT_EQ(x.p, y.p);
        EXPECT_EQ(x.q, y.q);
        EXPECT_EQ(x.algorithm, y.algorithm);
        EXPECT_EQ(x.mae, y.mae);
        EXPECT_EQ(x.rmse, y.rmse);
        EXPECT_GE(x.rmse, x.mae);
        EXPECT_GE(x.mae, 0.0);
        // Per-fit average over the H rolling fits of one replication.
        EXPECT_NEAR(x.avg_time * static_cast<double>(config.horizon), x.total_time, 0.05 * x.total_time);
    }
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i - 1];
        const auto& y = a.rows[i];
        EXPECT_LT(std::tie(x.dataset, x.p, x.q, x.algorithm), std::tie(y.dataset, y.p, y.q, y.algorithm));
    }
}

TEST(RunBench, MetricsAverageReplicationTraces) {
    BenchConfig config = small_config();
    config.datasets = {GeneratorKind::Nonlinear};
    config.order_pairs = {{1, 0}};
    config.algorithms = {Algorithm::Galerkin};
    const BenchReport report = run_bench(config);
    ASSERT_EQ(report.rows.size(), 1u);
    double expected = 0;
    for (std::size_t r = 0; r < config.replications; ++r) {
        const TimeSeries s = generate({GeneratorKind::Nonlinear, 80, config.base_seed + r});
        const auto errors = rolling_forecast(s, Algorithm::Galerkin, {1, 0, 0}, config).errors();
        expected += mae(errors);
    }
    EXPECT_NEAR(report.rows[0].mae, expected / 2.0, 1e-15);
}

TEST(RunBench, InvalidConfig) {
    BenchConfig config;
    config.window = 200;
    EXPECT_THROW(run_bench(config), Error);
    config = BenchConfig{};
    config.order_pairs = {{0, 0}};
    EXPECT_THROW(run_bench(config), Error);
}

TEST(Trace, UsesReplicationZero) {
    BenchConfig config = small_config();
    const auto rows = build_trace(config, GeneratorKind::Seasonal, {1, 1});
    ASSERT_EQ(rows.size(), 20u);
    const TimeSeries s = generate({GeneratorKind::Seasonal, 80, config.base_seed});
    const auto galerkin = rolling_forecast(s, Algorithm::Galerkin, {1, 0, 1}, config);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(rows[k].t, 60 + k);
        EXPECT_EQ(rows[k].truth, s[60 + k]);
        EXPECT_EQ(rows[k].galerkin, galerkin.steps[k].forecast);
    }
}

TEST(OrderPairs, DefaultGrid) {
    const auto pairs = default_order_pairs();
    ASSERT_EQ(pairs.size(), 6u);
    EXPECT_EQ(pairs[0].p, 1);
    EXPECT_EQ(pairs[0].q, 0);
    EXPECT_EQ(pairs[5].p, 5);
    EXPECT_EQ(pairs[5].q, 1);
}

}  // namespace
}  // namespace garima
