#pragma once

#include "garima/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace garima {

/// Where a series came from, when it was generated rather than loaded.
struct SeriesMeta {
    std::optional<std::string> label;
    std::optional<std::uint64_t> seed;
};

/// Non-empty, finite, immutable sequence of observations.
class TimeSeries {
public:
    explicit TimeSeries(Vector values, SeriesMeta meta = {});
    explicit TimeSeries(std::span<const double> values, SeriesMeta meta = {});

    const Vector& values() const noexcept { return values_; }
    const SeriesMeta& meta() const noexcept { return meta_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    double operator[](std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }

    /// Contiguous sub-series [first, first + count), keeping the metadata.
    TimeSeries slice(std::size_t first, std::size_t count) const;

private:
    Vector values_;
    SeriesMeta meta_;
};

/// Lag vectors x_t = (y_{t-1}, ..., y_{t-p}) with their aligned targets y_t.
struct LagMatrix {
    Matrix rows;                        ///< N x p
    Vector targets;                     ///< N
    std::vector<std::size_t> t_index;   ///< index of each target in the source series

    std::size_t size() const noexcept { return static_cast<std::size_t>(targets.size()); }
};

/// d-th order differences; the result has len - d entries.
TimeSeries difference(const TimeSeries& series, int d);

/// Inverse of difference(): `heads` are the first d values of the original
/// series. Throws BadSeedValues unless heads.size() == d.
TimeSeries undifference(const TimeSeries& diffed, int d, std::span<const double> heads);

/// Lag matrix of order p. p = 0 yields zero-column rows covering the whole series.
LagMatrix build_lag_matrix(const TimeSeries& series, int p);

/// Maps a forecast of the d-th difference at index len(history) back to the
/// original scale of `history`.
double integrate_forecast(const TimeSeries& history, int d, double diffed_forecast);

}  // namespace garima
