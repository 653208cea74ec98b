#include "garima/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace garima {

using nlohmann::json;

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json order_json(const ModelOrder& order) { return {{"p", order.p}, {"d", order.d}, {"q", order.q}}; }

ModelOrder order_from(const json& j) { return {j.at("p").get<int>(), j.at("d").get<int>(), j.at("q").get<int>()}; }

}  // namespace

TimeSeries read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "value") {
        throw Error(ErrorCode::BadInput, "series CSV must start with the header `value`");
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string cell = trim(line);
        if (cell.empty()) {
            continue;
        }
        double v = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            throw Error(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": not a number: " + cell);
        }
        values.push_back(v);
    }
    return TimeSeries(std::span<const double>(values));
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::BadInput, "cannot open " + path.string());
    }
    return read_series_csv(in);
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", series[i]);
        out << buf << '\n';
    }
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::BadInput, "cannot write " + path.string());
    }
    write_series_csv(out, series);
}

json generator_sidecar(const GeneratorSpec& spec) {
    return {{"kind", kind_slug(spec.kind)}, {"n", spec.n}, {"seed", spec.seed}, {"prng", std::string(kPrngName)}};
}

json to_json(const BasisSpec& spec) {
    json j;
    j["family"] = spec.family == BasisFamily::PolySquares ? "poly" : "bspline";
    j["input_dim"] = spec.input_dim;
    if (spec.family == BasisFamily::BSpline) {
        j["degree"] = spec.degree;
        j["knot_count"] = spec.knot_count;
        j["knots"] = json::array();
        for (const auto& breaks : spec.knots) {
            j["knots"].push_back(vector_json(breaks));
        }
    }
    return j;
}

BasisSpec basis_from_json(const json& j) {
    BasisSpec spec;
    const auto family = j.at("family").get<std::string>();
    if (family == "poly") {
        spec.family = BasisFamily::PolySquares;
    } else if (family == "bspline") {
        spec.family = BasisFamily::BSpline;
        spec.degree = j.at("degree").get<int>();
        spec.knot_count = j.at("knot_count").get<int>();
        for (const auto& breaks : j.at("knots")) {
            spec.knots.push_back(vector_from(breaks));
        }
    } else {
        throw Error(ErrorCode::BadInput, "unknown basis family " + family);
    }
    spec.input_dim = j.at("input_dim").get<int>();
    validate(spec);
    return spec;
}

json to_json(const GalerkinFit& fit) {
    json j;
    j["algorithm"] = "galerkin";
    j["order"] = order_json(fit.spec.order);
    j["basis"] = {{"ar", to_json(fit.spec.ar_basis)}, {"ma", to_json(fit.spec.ma_basis)}};
    j["ma_mode"] = to_string(fit.spec.ma_mode);
    j["beta"] = vector_json(fit.beta);
    j["stage1_beta"] = vector_json(fit.stage1_beta);
    if (fit.spec.ma_mode == MaMode::TwoStage) {
        j["alpha"] = vector_json(fit.alpha);
    } else {
        j["theta"] = vector_json(fit.theta);
    }
    j["sigma2"] = fit.sigma2_hat;
    const auto& diag = fit.diagnostics;
    j["diagnostics"] = {{"ar_rank", to_string(diag.ar_rank)},
                        {"ma_rank", to_string(diag.ma_rank)},
                        {"ar_orthogonality", diag.ar_orthogonality},
                        {"ma_orthogonality", diag.ma_orthogonality},
                        {"ar_rows", diag.ar_rows},
                        {"ma_rows", diag.ma_rows},
                        {"window_length", diag.window_length},
                        {"residual_offset", fit.residual_offset}};
    return j;
}

json to_json(const ArimaFit& fit) {
    json j;
    j["algorithm"] = "arima_css";
    j["order"] = order_json(fit.order);
    j["intercept"] = fit.intercept;
    j["has_intercept"] = fit.has_intercept;
    j["psi"] = vector_json(fit.psi);
    j["theta"] = vector_json(fit.theta);
    j["sigma2"] = fit.sigma2;
    j["diagnostics"] = {{"converged", fit.converged}, {"iterations", fit.iterations}, {"loss", fit.loss}};
    return j;
}

AnyFit fit_from_json(const json& j) {
    try {
        const auto algorithm = j.at("algorithm").get<std::string>();
        if (algorithm == "galerkin") {
            GalerkinFit fit;
            fit.spec.order = order_from(j.at("order"));
            fit.spec.ar_basis = basis_from_json(j.at("basis").at("ar"));
            fit.spec.ma_basis = basis_from_json(j.at("basis").at("ma"));
            const auto mode = j.at("ma_mode").get<std::string>();
            if (mode != "twostage" && mode != "joint") {
                throw Error(ErrorCode::BadInput, "unknown ma_mode " + mode);
            }
            fit.spec.ma_mode = mode == "joint" ? MaMode::Joint : MaMode::TwoStage;
            fit.spec.validate();
            fit.beta = vector_from(j.at("beta"));
            fit.stage1_beta = j.contains("stage1_beta") ? vector_from(j.at("stage1_beta")) : fit.beta;
            if (fit.spec.ma_mode == MaMode::TwoStage) {
                fit.alpha = vector_from(j.at("alpha"));
            } else {
                fit.theta = vector_from(j.at("theta"));
            }
            fit.sigma2_hat = j.value("sigma2", 0.0);
            return fit;
        }
        if (algorithm == "arima_css") {
            ArimaFit fit;
            fit.order = order_from(j.at("order"));
            fit.order.validate();
            fit.intercept = j.at("intercept").get<double>();
            fit.has_intercept = j.value("has_intercept", true);
            fit.psi = vector_from(j.at("psi"));
            fit.theta = vector_from(j.at("theta"));
            if (fit.psi.size() != fit.order.p || fit.theta.size() != fit.order.q) {
                throw Error(ErrorCode::BadInput, "coefficient lengths do not match the order");
            }
            fit.sigma2 = j.value("sigma2", 0.0);
            if (j.contains("diagnostics")) {
                const auto& diag = j.at("diagnostics");
                fit.converged = diag.value("converged", false);
                fit.iterations = diag.value("iterations", 0);
                fit.loss = diag.value("loss", 0.0);
            }
            return fit;
        }
        throw Error(ErrorCode::BadInput, "unknown algorithm " + algorithm);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("malformed fit JSON: ") + e.what());
    }
}

double forecast_any(const AnyFit& fit, const TimeSeries& history) {
    return std::visit(
        [&](const auto& f) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, GalerkinFit>) {
                return forecast_one_step(f, history);
            } else {
                return arima_forecast_one_step(f, history);
            }
        },
        fit);
}

void write_report_csv(std::ostream& out, const BenchReport& report) {
    out << "dataset,p,q,algorithm,mae,rmse,total_time_s,avg_time_s\n";
    for (const auto& row : report.rows) {
        out << row.dataset << ',' << row.p << ',' << row.q << ',' << row.algorithm << ',' << fixed4(row.mae) << ','
            << fixed4(row.rmse) << ',' << fixed4(row.total_time) << ',' << fixed4(row.avg_time) << '\n';
    }
}

json to_json(const BenchReport& report) {
    const auto& c = report.config;
    json pairs = json::array();
    for (const auto& pair : c.order_pairs) {
        pairs.push_back({pair.p, pair.q});
    }
    json datasets = json::array();
    for (auto kind : c.datasets) {
        datasets.push_back(dataset_name(kind));
    }
    json algorithms = json::array();
    for (auto algorithm : c.algorithms) {
        algorithms.push_back(algorithm_name(algorithm));
    }
    json j;
    j["metadata"] = {{"window", c.window},
                     {"horizon", c.horizon},
                     {"replications", c.replications},
                     {"series_length", c.series_length},
                     {"base_seed", c.base_seed},
                     {"d", c.d},
                     {"order_pairs", pairs},
                     {"datasets", datasets},
                     {"algorithms", algorithms},
                     {"basis", format_basis(c.basis)},
                     {"ma_mode", to_string(c.ma_mode)},
                     {"arima_intercept", c.arima_intercept},
                     {"prng", std::string(kPrngName)},
                     {"seed_scheme", "base_seed + replication_index"},
                     {"timing", "wall clock (steady_clock), fit + one-step forecast per window"}};
    j["rows"] = json::array();
    for (const auto& row : report.rows) {
        j["rows"].push_back({{"dataset", row.dataset},
                             {"p", row.p},
                             {"q", row.q},
                             {"algorithm", row.algorithm},
                             {"mae", row.mae},
                             {"rmse", row.rmse},
                             {"total_time_s", row.total_time},
                             {"avg_time_s", row.avg_time},
                             {"fallback_steps", row.fallback_steps},
                             {"regularized_fits", row.regularized_fits},
                             {"unconverged_fits", row.unconverged_fits},
                             {"max_ar_orthogonality", row.max_ar_orthogonality},
                             {"max_ma_orthogonality", row.max_ma_orthogonality}});
    }
    return j;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    out << "t,true,arima,galerkin\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g\n", row.t, row.truth, row.arima, row.galerkin);
        out << buf;
    }
}

BasisSpec parse_basis(const std::string& text) {
    if (text == "poly") {
        return BasisSpec::poly(0);
    }
    const std::string prefix = "bspline";
    if (text.rfind(prefix, 0) != 0) {
        throw Error(ErrorCode::BadInput, "basis must be `poly` or `bspline[:degree=D,knots=K]`");
    }
    BasisSpec spec = BasisSpec::bspline(0);
    std::string rest = text.substr(prefix.size());
    if (!rest.empty()) {
        if (rest.front() != ':') {
            throw Error(ErrorCode::BadInput, "malformed basis option list: " + text);
        }
        std::stringstream items(rest.substr(1));
        std::string item;
        while (std::getline(items, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorCode::BadInput, "basis option needs key=value: " + item);
            }
            const std::string key = item.substr(0, eq);
            const std::string value = item.substr(eq + 1);
            int number = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), number);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw Error(ErrorCode::BadInput, "basis option value must be an integer: " + item);
            }
            if (key == "degree") {
                spec.degree = number;
            } else if (key == "knots") {
                spec.knot_count = number;
            } else {
                throw Error(ErrorCode::BadInput, "unknown basis option " + key);
            }
        }
    }
    validate(spec);
    return spec;
}

std::string format_basis(const BasisSpec& spec) {
    if (spec.family == BasisFamily::PolySquares) {
        return "poly";
    }
    return "bspline:degree=" + std::to_string(spec.degree) + ",knots=" + std::to_string(spec.knot_count);
}

}  // namespace garima
