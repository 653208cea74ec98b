#include "garima/series.hpp"

#include <cmath>

namespace garima {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::BadSeedValues: return "BadSeedValues";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

void ModelOrder::validate() const {
    if (p < 0 || d < 0 || q < 0) {
        throw Error(ErrorCode::BadInput, "model orders must be non-negative");
    }
    if (p + q < 1) {
        throw Error(ErrorCode::BadInput, "model needs at least one AR or MA lag (p + q >= 1)");
    }
}

TimeSeries::TimeSeries(Vector values, SeriesMeta meta) : values_(std::move(values)), meta_(std::move(meta)) {
    if (values_.size() == 0) {
        throw Error(ErrorCode::BadInput, "time series must contain at least one value");
    }
    if (!values_.allFinite()) {
        throw Error(ErrorCode::BadInput, "time series contains non-finite values");
    }
}

TimeSeries::TimeSeries(std::span<const double> values, SeriesMeta meta)
    : TimeSeries(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())),
                 std::move(meta)) {}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > size()) {
        throw Error(ErrorCode::BadInput, "slice out of range");
    }
    return TimeSeries(Vector(values_.segment(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count))),
                      meta_);
}

TimeSeries difference(const TimeSeries& series, int d) {
    if (d < 0) {
        throw Error(ErrorCode::BadInput, "differencing order must be non-negative");
    }
    if (series.size() <= static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::InsufficientData, "series length must exceed the differencing order");
    }
    Vector v = series.values();
    for (int k = 0; k < d; ++k) {
        const Eigen::Index n = v.size() - 1;
        v = (v.tail(n) - v.head(n)).eval();
    }
    return TimeSeries(std::move(v), series.meta());
}

TimeSeries undifference(const TimeSeries& diffed, int order, std::span<const double> heads) {
    if (order < 0 || heads.size() != static_cast<std::size_t>(order)) {
        throw Error(ErrorCode::BadSeedValues, "expected " + std::to_string(order) + " seed values, got " +
                                                  std::to_string(heads.size()));
    }
    const auto d = static_cast<Eigen::Index>(order);
    if (d == 0) {
        return diffed;
    }
    // First element of each difference level, taken from the seed values.
    Vector firsts(d);
    Vector level = Eigen::Map<const Vector>(heads.data(), d);
    for (Eigen::Index k = 0; k < d; ++k) {
        firsts(k) = level(0);
        const Eigen::Index n = level.size() - 1;
        level = (level.tail(n) - level.head(n)).eval();
    }

    Vector current = diffed.values();
    for (Eigen::Index k = d - 1; k >= 0; --k) {
        Vector up(current.size() + 1);
        up(0) = firsts(k);
        for (Eigen::Index i = 0; i < current.size(); ++i) {
            up(i + 1) = up(i) + current(i);
        }
        current = std::move(up);
    }
    return TimeSeries(std::move(current), diffed.meta());
}

LagMatrix build_lag_matrix(const TimeSeries& series, int p) {
    if (p < 0) {
        throw Error(ErrorCode::BadInput, "lag order must be non-negative");
    }
    const auto n = series.size();
    if (n <= static_cast<std::size_t>(p)) {
        throw Error(ErrorCode::InsufficientData, "series length must exceed the lag order");
    }
    const auto rows = static_cast<Eigen::Index>(n) - p;
    LagMatrix lags;
    lags.rows.resize(rows, p);
    lags.targets.resize(rows);
    lags.t_index.resize(static_cast<std::size_t>(rows));
    const Vector& y = series.values();
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = r + p;
        for (Eigen::Index i = 0; i < p; ++i) {
            lags.rows(r, i) = y(t - i - 1);
        }
        lags.targets(r) = y(t);
        lags.t_index[static_cast<std::size_t>(r)] = static_cast<std::size_t>(t);
    }
    return lags;
}

double integrate_forecast(const TimeSeries& history, int d, double diffed_forecast) {
    if (d == 0) {
        return diffed_forecast;
    }
    if (history.size() < static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::InsufficientHistory, "history too short to integrate the forecast");
    }
    // y_n = D^d y_n + sum_{k<d} (D^k y)_{n-1}
    double value = diffed_forecast;
    Vector level = history.values();
    for (int k = 0; k < d; ++k) {
        value += level(level.size() - 1);
        const Eigen::Index n = level.size() - 1;
        level = (level.tail(n) - level.head(n)).eval();
    }
    return value;
}

}  // namespace garima
