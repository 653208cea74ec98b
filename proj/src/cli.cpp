#include "garima/cli.hpp"

#include "garima/bench.hpp"
#include "garima/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace garima {

namespace {

/// Bad flag combinations found after parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int kMaxCliDifferencing = 3;

struct ModelFlags {
    int p = 0;
    int q = 0;
    int d = 0;
    std::string basis = "poly";
    std::string ma_mode = "twostage";
    bool no_intercept = false;
    CLI::Option* p_opt = nullptr;
    CLI::Option* q_opt = nullptr;
    CLI::Option* d_opt = nullptr;
    CLI::Option* basis_opt = nullptr;
    CLI::Option* ma_mode_opt = nullptr;
    CLI::Option* no_intercept_opt = nullptr;
};

void add_model_flags(CLI::App& app, ModelFlags& flags) {
    flags.p_opt = app.add_option("--p", flags.p, "AR order p")->check(CLI::NonNegativeNumber);
    flags.q_opt = app.add_option("--q", flags.q, "MA order q")->check(CLI::NonNegativeNumber);
    flags.d_opt = app.add_option("--d", flags.d, "differencing order d (0-3)")->check(CLI::Range(0, kMaxCliDifferencing));
    flags.basis_opt =
        app.add_option("--basis", flags.basis, "Galerkin basis: poly | bspline[:degree=D,knots=K]")->capture_default_str();
    flags.ma_mode_opt = app.add_option("--ma-mode", flags.ma_mode, "Galerkin MA stage: twostage | joint")
                            ->check(CLI::IsMember({"twostage", "joint"}))
                            ->capture_default_str();
    flags.no_intercept_opt = app.add_flag("--no-intercept", flags.no_intercept, "fit ARIMA without a constant term");
}

MaMode parse_ma_mode(const std::string& text) { return text == "joint" ? MaMode::Joint : MaMode::TwoStage; }

BasisSpec parse_basis_flag(const std::string& text) {
    try {
        return parse_basis(text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

GeneratorKind parse_kind_flag(const std::string& text) {
    const auto kind = parse_generator_kind(text);
    if (!kind) {
        throw UsageError("unknown dataset kind '" + text + "' (noisy_arma, seasonal, trend_ar, nonlinear)");
    }
    return *kind;
}

unsigned threads_from_env() {
    const char* value = std::getenv("GALERKIN_ARIMA_THREADS");
    if (value == nullptr || *value == '\0') {
        return 0;
    }
    char* end = nullptr;
    const long parsed = std::strtol(value, &end, 10);
    if (*end != '\0' || parsed < 0) {
        throw UsageError("GALERKIN_ARIMA_THREADS must be a non-negative integer");
    }
    return static_cast<unsigned>(parsed);
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
    if (text == "arima") {
        return {Algorithm::ArimaCss};
    }
    if (text == "galerkin") {
        return {Algorithm::Galerkin};
    }
    return {Algorithm::ArimaCss, Algorithm::Galerkin};
}

/// Writes through `path`, or to `fallback` when the path is empty or "-".
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& writer) {
    if (path.empty() || path == "-") {
        writer(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::BadInput, "cannot write " + path);
    }
    writer(file);
    if (!file) {
        throw Error(ErrorCode::BadInput, "failed writing " + path);
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Galerkin-ARIMA and CSS-ARIMA forecasting toolkit"};
    app.name("galerkin_arima");
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic series as one-column CSV plus a JSON sidecar");
    std::string gen_kind;
    std::size_t gen_n = 300;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--kind", gen_kind, "noisy_arma | seasonal | trend_ar | nonlinear")->required();
    gen->add_option("--n", gen_n, "series length")->check(CLI::Range(std::size_t{3}, std::size_t{100000000}))
        ->capture_default_str();
    gen->add_option("--seed", gen_seed, "PRNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output CSV path; the sidecar goes next to it with a .json extension")
        ->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit one model on a series CSV and write it as JSON");
    ModelFlags fit_flags;
    std::string fit_algo;
    std::string fit_in;
    std::string fit_out;
    add_model_flags(*fit_cmd, fit_flags);
    fit_cmd->add_option("--algo", fit_algo, "arima | galerkin")->required()->check(CLI::IsMember({"arima", "galerkin"}));
    fit_cmd->add_option("--in", fit_in, "input series CSV")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--out", fit_out, "output JSON path (default: standard output)");

    // forecast
    auto* fc = app.add_subcommand("forecast", "print the one-step-ahead forecast following a series");
    std::string fc_fit;
    std::string fc_in;
    fc->add_option("--fit", fc_fit, "fit JSON written by `fit`")->required()->check(CLI::ExistingFile);
    fc->add_option("--in", fc_in, "history series CSV")->required()->check(CLI::ExistingFile);

    // bench
    auto* bench = app.add_subcommand("bench", "rolling one-step benchmark over the synthetic datasets");
    ModelFlags bench_flags;
    BenchConfig bench_cfg;
    bool bench_defaults = false;
    std::string bench_algo = "both";
    std::string bench_format = "csv";
    std::string bench_out;
    std::vector<std::string> bench_datasets;
    add_model_flags(*bench, bench_flags);
    auto* defaults_opt = bench->add_flag("--defaults", bench_defaults,
                                         "full reference grid: 4 datasets x 6 order pairs x 2 algorithms, W=100, H=150, R=10");
    auto* window_opt = bench->add_option("--window", bench_cfg.window, "training window W")->check(CLI::PositiveNumber);
    auto* horizon_opt = bench->add_option("--horizon", bench_cfg.horizon, "forecast steps H")->check(CLI::PositiveNumber);
    auto* reps_opt = bench->add_option("--reps", bench_cfg.replications, "Monte Carlo replications R")
                         ->check(CLI::PositiveNumber);
    auto* dataset_opt = bench->add_option("--dataset", bench_datasets, "restrict to dataset kind(s)");
    bench->add_option("--seed", bench_cfg.base_seed, "base seed; replication r uses seed + r")->capture_default_str();
    bench->add_option("--algo", bench_algo, "arima | galerkin | both")
        ->check(CLI::IsMember({"arima", "galerkin", "both"}))
        ->capture_default_str();
    bench->add_option("--format", bench_format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    bench->add_option("--out", bench_out, "output path (default: standard output)");
    for (auto* opt : {bench_flags.p_opt, bench_flags.q_opt, bench_flags.d_opt, window_opt, horizon_opt, reps_opt,
                      dataset_opt}) {
        defaults_opt->excludes(opt);
    }
    bench_flags.p_opt->needs(bench_flags.q_opt);
    bench_flags.q_opt->needs(bench_flags.p_opt);

    // trace
    auto* trace = app.add_subcommand("trace", "export per-step true/ARIMA/Galerkin values for plotting");
    ModelFlags trace_flags;
    BenchConfig trace_cfg;
    std::string trace_kind;
    bool trace_defaults = false;
    std::string trace_out;
    std::string trace_out_dir;
    add_model_flags(*trace, trace_flags);
    auto* trace_kind_opt = trace->add_option("--kind", trace_kind, "dataset kind");
    auto* trace_defaults_opt =
        trace->add_flag("--defaults", trace_defaults, "every dataset and default order pair, one CSV each");
    trace->add_option("--window", trace_cfg.window, "training window W")->check(CLI::PositiveNumber);
    trace->add_option("--horizon", trace_cfg.horizon, "forecast steps H")->check(CLI::PositiveNumber);
    trace->add_option("--seed", trace_cfg.base_seed, "seed of replication 0")->capture_default_str();
    auto* trace_out_opt = trace->add_option("--out", trace_out, "output CSV (default: standard output)");
    auto* trace_dir_opt = trace->add_option("--out-dir", trace_out_dir, "directory for --defaults output");
    trace_defaults_opt->excludes(trace_kind_opt)->excludes(trace_out_opt)->excludes(trace_flags.p_opt)
        ->excludes(trace_flags.q_opt);
    trace_defaults_opt->needs(trace_dir_opt);
    trace_dir_opt->needs(trace_defaults_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            GeneratorSpec spec{parse_kind_flag(gen_kind), gen_n, gen_seed, 1.0};
            const TimeSeries series = generate(spec);
            write_series_csv(std::filesystem::path(gen_out), series);
            std::filesystem::path sidecar(gen_out);
            sidecar.replace_extension(".json");
            emit(sidecar.string(), out, [&](std::ostream& o) { o << generator_sidecar(spec).dump(2) << '\n'; });
            return 0;
        }

        if (*fit_cmd) {
            const ModelOrder order{fit_flags.p, fit_flags.d, fit_flags.q};
            if (order.p + order.q < 1) {
                throw UsageError("at least one of --p and --q must be positive");
            }
            const bool galerkin = fit_algo == "galerkin";
            if (galerkin && fit_flags.no_intercept_opt->count() > 0) {
                throw UsageError("--no-intercept applies to --algo arima only");
            }
            if (!galerkin && (fit_flags.basis_opt->count() > 0 || fit_flags.ma_mode_opt->count() > 0)) {
                throw UsageError("--basis and --ma-mode apply to --algo galerkin only");
            }
            const TimeSeries series = read_series_csv(std::filesystem::path(fit_in));
            nlohmann::json result;
            if (galerkin) {
                const auto spec = GalerkinSpec::with_basis(order, parse_basis_flag(fit_flags.basis),
                                                           parse_ma_mode(fit_flags.ma_mode));
                result = to_json(fit_galerkin(series, spec));
            } else {
                ArimaOptions options;
                options.intercept = !fit_flags.no_intercept;
                result = to_json(fit_arima_css(series, order, options));
            }
            emit(fit_out, out, [&](std::ostream& o) { o << result.dump(2) << '\n'; });
            return 0;
        }

        if (*fc) {
            std::ifstream in(fc_fit, std::ios::binary);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorCode::BadInput, std::string("cannot parse fit JSON: ") + e.what());
            }
            const AnyFit fit = fit_from_json(j);
            const TimeSeries history = read_series_csv(std::filesystem::path(fc_in));
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", forecast_any(fit, history));
            out << buf << '\n';
            return 0;
        }

        if (*bench) {
            if (!bench_defaults) {
                if (bench_flags.p_opt->count() > 0) {
                    bench_cfg.order_pairs = {{bench_flags.p, bench_flags.q}};
                }
                bench_cfg.d = bench_flags.d;
                if (!bench_datasets.empty()) {
                    bench_cfg.datasets.clear();
                    for (const auto& name : bench_datasets) {
                        bench_cfg.datasets.push_back(parse_kind_flag(name));
                    }
                }
            }
            bench_cfg.algorithms = parse_algorithms(bench_algo);
            bench_cfg.basis = parse_basis_flag(bench_flags.basis);
            bench_cfg.ma_mode = parse_ma_mode(bench_flags.ma_mode);
            bench_cfg.arima_intercept = !bench_flags.no_intercept;
            bench_cfg.threads = threads_from_env();
            try {
                bench_cfg.validate();
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            const BenchReport report = run_bench(bench_cfg);
            emit(bench_out, out, [&](std::ostream& o) {
                if (bench_format == "json") {
                    o << to_json(report).dump(2) << '\n';
                } else {
                    write_report_csv(o, report);
                }
            });
            return 0;
        }

        if (*trace) {
            trace_cfg.d = trace_flags.d;
            trace_cfg.basis = parse_basis_flag(trace_flags.basis);
            trace_cfg.ma_mode = parse_ma_mode(trace_flags.ma_mode);
            trace_cfg.arima_intercept = !trace_flags.no_intercept;
            if (trace_defaults) {
                std::filesystem::create_directories(trace_out_dir);
                for (auto kind : trace_cfg.datasets) {
                    for (const auto& pair : trace_cfg.order_pairs) {
                        const auto rows = build_trace(trace_cfg, kind, pair);
                        const auto path = std::filesystem::path(trace_out_dir) /
                                          (kind_slug(kind) + "_p" + std::to_string(pair.p) + "_q" +
                                           std::to_string(pair.q) + ".csv");
                        emit(path.string(), out, [&](std::ostream& o) { write_trace_csv(o, rows); });
                    }
                }
                return 0;
            }
            if (trace_kind.empty() || trace_flags.p_opt->count() + trace_flags.q_opt->count() == 0) {
                throw UsageError("trace needs --kind and --p/--q, or --defaults --out-dir DIR");
            }
            const OrderPair pair{trace_flags.p, trace_flags.q};
            try {
                ModelOrder{pair.p, trace_cfg.d, pair.q}.validate();
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            const auto rows = build_trace(trace_cfg, parse_kind_flag(trace_kind), pair);
            emit(trace_out, out, [&](std::ostream& o) { write_trace_csv(o, rows); });
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace garima
