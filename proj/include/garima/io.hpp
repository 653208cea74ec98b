#pragma once

#include "garima/arima.hpp"
#include "garima/bench.hpp"
#include "garima/galerkin.hpp"
#include "garima/series.hpp"
#include "garima/synthetic.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace garima {

// One-column series CSV: header `value`, one number per line. Reading accepts
// `\r\n` line endings and ignores blank lines.
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(std::ostream& out, const TimeSeries& series);
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);

/// {kind, n, seed, prng}
nlohmann::json generator_sidecar(const GeneratorSpec& spec);

nlohmann::json to_json(const BasisSpec& spec);
BasisSpec basis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GalerkinFit& fit);
nlohmann::json to_json(const ArimaFit& fit);

/// Either kind of fitted model, as loaded from its JSON form.
using AnyFit = std::variant<GalerkinFit, ArimaFit>;
AnyFit fit_from_json(const nlohmann::json& j);
double forecast_any(const AnyFit& fit, const TimeSeries& history);

/// Header `dataset,p,q,algorithm,mae,rmse,total_time_s,avg_time_s`, 4 decimals.
void write_report_csv(std::ostream& out, const BenchReport& report);
nlohmann::json to_json(const BenchReport& report);

/// Header `t,true,arima,galerkin`.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

/// Parses `poly` or `bspline[:degree=D,knots=K]`.
BasisSpec parse_basis(const std::string& text);
std::string format_basis(const BasisSpec& spec);

}  // namespace garima
