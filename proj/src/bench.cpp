#include "garima/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

namespace garima {

std::string algorithm_name(Algorithm algorithm) {
    return algorithm == Algorithm::ArimaCss ? "arima_css" : "galerkin";
}

std::vector<OrderPair> default_order_pairs() { return {{1, 0}, {5, 0}, {0, 1}, {0, 5}, {1, 5}, {5, 1}}; }

void BenchConfig::validate() const {
    if (window == 0 || horizon == 0 || replications == 0) {
        throw Error(ErrorCode::BadInput, "window, horizon and replications must be positive");
    }
    if (window + horizon > series_length) {
        throw Error(ErrorCode::BadInput, "window + horizon exceeds the generated series length");
    }
    if (d < 0) {
        throw Error(ErrorCode::BadInput, "differencing order must be non-negative");
    }
    if (order_pairs.empty() || algorithms.empty() || datasets.empty()) {
        throw Error(ErrorCode::BadInput, "bench needs at least one order pair, algorithm and dataset");
    }
    for (const auto& pair : order_pairs) {
        ModelOrder{pair.p, d, pair.q}.validate();
    }
    garima::validate(basis);
}

std::vector<double> ForecastTrace::errors() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& step : steps) {
        out.push_back(step.truth - step.forecast);
    }
    return out;
}

double mae(std::span<const double> errors) {
    if (errors.empty()) {
        throw Error(ErrorCode::BadInput, "MAE of an empty error sequence");
    }
    double sum = 0;
    for (double e : errors) {
        sum += std::abs(e);
    }
    return sum / static_cast<double>(errors.size());
}

double rmse(std::span<const double> errors) {
    if (errors.empty()) {
        throw Error(ErrorCode::BadInput, "RMSE of an empty error sequence");
    }
    double sum = 0;
    for (double e : errors) {
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(errors.size()));
}

ForecastTrace rolling_forecast(const TimeSeries& series, Algorithm algorithm, ModelOrder order,
                               const BenchConfig& config) {
    const std::size_t w = config.window;
    const std::size_t h = config.horizon;
    if (w == 0 || h == 0) {
        throw Error(ErrorCode::BadInput, "window and horizon must be positive");
    }
    if (series.size() < w + h) {
        throw Error(ErrorCode::BadInput, "series of length " + std::to_string(series.size()) +
                                             " is shorter than window + horizon = " + std::to_string(w + h));
    }
    order.validate();
    const GalerkinSpec galerkin_spec = GalerkinSpec::with_basis(order, config.basis, config.ma_mode);
    ArimaOptions arima_options;
    arima_options.intercept = config.arima_intercept;

    using Clock = std::chrono::steady_clock;
    ForecastTrace trace;
    trace.steps.reserve(h);
    for (std::size_t i = w; i < w + h; ++i) {
        // The window is cut before y_i is read, so the forecast cannot see it.
        const TimeSeries window = series.slice(i - w, w);
        ForecastStep step;
        step.t_index = i;

        const auto started = Clock::now();
        try {
            if (algorithm == Algorithm::Galerkin) {
                const GalerkinFit fit = fit_galerkin(window, galerkin_spec);
                step.forecast = forecast_one_step(fit, window);
                trace.max_ar_orthogonality = std::max(trace.max_ar_orthogonality, fit.diagnostics.ar_orthogonality);
                trace.max_ma_orthogonality = std::max(trace.max_ma_orthogonality, fit.diagnostics.ma_orthogonality);
                if (fit.diagnostics.ar_rank == RankFlag::Regularized ||
                    fit.diagnostics.ma_rank == RankFlag::Regularized) {
                    ++trace.regularized_fits;
                }
            } else {
                const ArimaFit fit = fit_arima_css(window, order, arima_options);
                step.forecast = arima_forecast_one_step(fit, window);
                if (!fit.converged) {
                    ++trace.unconverged_fits;
                }
            }
            if (!std::isfinite(step.forecast)) {
                throw Error(ErrorCode::BadInput, "non-finite forecast");
            }
        } catch (const Error&) {
            step.forecast = window.values().mean();
            step.fallback = true;
            ++trace.fallback_count;
        }
        trace.total_seconds += std::chrono::duration<double>(Clock::now() - started).count();

        step.truth = series[i];
        trace.steps.push_back(step);
    }
    return trace;
}

namespace {

unsigned worker_count(unsigned requested, std::size_t tasks) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

template <typename Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const unsigned n = worker_count(threads, count);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
    config.validate();
    const std::size_t n_data = config.datasets.size();
    const std::size_t n_orders = config.order_pairs.size();
    const std::size_t n_algos = config.algorithms.size();
    const std::size_t reps = config.replications;

    // series[dataset * reps + r]; every algorithm and order sees the same data per replication.
    std::vector<TimeSeries> series;
    series.reserve(n_data * reps);
    for (const auto kind : config.datasets) {
        for (std::size_t r = 0; r < reps; ++r) {
            series.push_back(generate({kind, config.series_length, config.base_seed + r, 1.0}));
        }
    }

    const std::size_t cells = n_data * n_orders * n_algos;
    std::vector<ForecastTrace> traces(cells * reps);
    parallel_for(traces.size(), config.threads, [&](std::size_t task) {
        const std::size_t r = task % reps;
        const std::size_t cell = task / reps;
        const std::size_t a = cell % n_algos;
        const std::size_t o = (cell / n_algos) % n_orders;
        const std::size_t ds = cell / (n_algos * n_orders);
        const OrderPair pair = config.order_pairs[o];
        traces[task] = rolling_forecast(series[ds * reps + r], config.algorithms[a], {pair.p, config.d, pair.q},
                                        config);
    });

    BenchReport report;
    report.config = config;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const std::size_t a = cell % n_algos;
        const std::size_t o = (cell / n_algos) % n_orders;
        const std::size_t ds = cell / (n_algos * n_orders);
        BenchRow row;
        row.dataset = dataset_name(config.datasets[ds]);
        row.p = config.order_pairs[o].p;
        row.q = config.order_pairs[o].q;
        row.algorithm = algorithm_name(config.algorithms[a]);
        for (std::size_t r = 0; r < reps; ++r) {
            const ForecastTrace& trace = traces[cell * reps + r];
            const auto errors = trace.errors();
            row.mae += mae(errors);
            row.rmse += rmse(errors);
            row.total_time += trace.total_seconds;
            row.fallback_steps += trace.fallback_count;
            row.regularized_fits += trace.regularized_fits;
            row.unconverged_fits += trace.unconverged_fits;
            row.max_ar_orthogonality = std::max(row.max_ar_orthogonality, trace.max_ar_orthogonality);
            row.max_ma_orthogonality = std::max(row.max_ma_orthogonality, trace.max_ma_orthogonality);
        }
        const auto denom = static_cast<double>(reps);
        row.mae /= denom;
        row.rmse /= denom;
        row.total_time /= denom;
        row.avg_time = row.total_time / static_cast<double>(config.horizon);
        report.rows.push_back(std::move(row));
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const BenchRow& x, const BenchRow& y) {
        return std::tie(x.dataset, x.p, x.q, x.algorithm) < std::tie(y.dataset, y.p, y.q, y.algorithm);
    });
    return report;
}

std::vector<TraceRow> build_trace(const BenchConfig& config, GeneratorKind dataset, OrderPair order) {
    BenchConfig single = config;
    single.datasets = {dataset};
    single.order_pairs = {order};
    single.validate();
    const TimeSeries series = generate({dataset, config.series_length, config.base_seed, 1.0});
    const ModelOrder model{order.p, config.d, order.q};
    const ForecastTrace arima = rolling_forecast(series, Algorithm::ArimaCss, model, config);
    const ForecastTrace galerkin = rolling_forecast(series, Algorithm::Galerkin, model, config);

    std::vector<TraceRow> rows;
    rows.reserve(arima.steps.size());
    for (std::size_t i = 0; i < arima.steps.size(); ++i) {
        rows.push_back({arima.steps[i].t_index, arima.steps[i].truth, arima.steps[i].forecast,
                        galerkin.steps[i].forecast});
    }
    return rows;
}

}  // namespace garima
