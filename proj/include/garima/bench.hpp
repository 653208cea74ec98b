#pragma once

#include "garima/arima.hpp"
#include "garima/basis.hpp"
#include "garima/galerkin.hpp"
#include "garima/synthetic.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace garima {

enum class Algorithm { ArimaCss, Galerkin };

/// Report name: "arima_css" or "galerkin".
std::string algorithm_name(Algorithm algorithm);

struct OrderPair {
    int p = 0;
    int q = 0;
    friend bool operator==(const OrderPair&, const OrderPair&) = default;
};

/// The six (p, q) pairs of the reference experiment grid.
std::vector<OrderPair> default_order_pairs();

struct BenchConfig {
    std::size_t window = 100;
    std::size_t horizon = 150;
    std::size_t replications = 10;
    std::size_t series_length = 300;
    std::uint64_t base_seed = 42;
    int d = 0;
    std::vector<OrderPair> order_pairs = default_order_pairs();
    std::vector<Algorithm> algorithms{Algorithm::ArimaCss, Algorithm::Galerkin};
    std::vector<GeneratorKind> datasets{GeneratorKind::NoisyArma, GeneratorKind::Seasonal, GeneratorKind::TrendAr,
                                        GeneratorKind::Nonlinear};
    BasisSpec basis = BasisSpec::poly(0);  ///< family template for both Galerkin stages
    MaMode ma_mode = MaMode::TwoStage;
    bool arima_intercept = true;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    void validate() const;
};

struct ForecastStep {
    std::size_t t_index = 0;
    double truth = 0;
    double forecast = 0;
    bool fallback = false;  ///< fit failed; forecast is the window mean
};

/// Per-step forecasts of one rolling run plus its timing and fit diagnostics.
struct ForecastTrace {
    std::vector<ForecastStep> steps;
    double total_seconds = 0;  ///< summed fit + forecast wall time
    std::size_t fallback_count = 0;
    std::size_t regularized_fits = 0;
    std::size_t unconverged_fits = 0;
    double max_ar_orthogonality = 0;  ///< Galerkin only
    double max_ma_orthogonality = 0;  ///< Galerkin only

    std::vector<double> errors() const;
};

/// Refits on [i - W, i) and forecasts index i, for i = W .. W + H - 1.
/// Throws BadInput before fitting anything when the series is shorter than W + H.
ForecastTrace rolling_forecast(const TimeSeries& series, Algorithm algorithm, ModelOrder order,
                               const BenchConfig& config);

/// Mean absolute error; BadInput on empty input.
double mae(std::span<const double> errors);
/// Root mean squared error; BadInput on empty input.
double rmse(std::span<const double> errors);

struct BenchRow {
    std::string dataset;
    int p = 0;
    int q = 0;
    std::string algorithm;
    double mae = 0;
    double rmse = 0;
    double total_time = 0;  ///< seconds over the H rolling fits, averaged over replications
    double avg_time = 0;    ///< total_time / H
    std::size_t fallback_steps = 0;
    std::size_t regularized_fits = 0;
    std::size_t unconverged_fits = 0;
    double max_ar_orthogonality = 0;
    double max_ma_orthogonality = 0;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchRow> rows;  ///< sorted by (dataset, p, q, algorithm)
};

/// Runs every (dataset, order pair, algorithm) cell over R replications with
/// seeds base_seed + r. Cells and replications run on a worker pool; each
/// timed region executes on a single thread.
BenchReport run_bench(const BenchConfig& config);

/// Per-step values of both algorithms on replication 0 of one dataset/order.
struct TraceRow {
    std::size_t t = 0;
    double truth = 0;
    double arima = 0;
    double galerkin = 0;
};

std::vector<TraceRow> build_trace(const BenchConfig& config, GeneratorKind dataset, OrderPair order);

}  // namespace garima
