#pragma once

#include "garima/series.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace garima {

enum class GeneratorKind { NoisyArma, Seasonal, TrendAr, Nonlinear };

/// Report name, e.g. "Noisy_ARMA".
std::string dataset_name(GeneratorKind kind);
/// CLI name, e.g. "noisy_arma".
std::string kind_slug(GeneratorKind kind);
/// Accepts either the CLI slug or the report name (case-insensitive).
std::optional<GeneratorKind> parse_generator_kind(std::string_view text);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::NoisyArma;
    std::size_t n = 300;
    std::uint64_t seed = 0;
    /// Multiplies every innovation; 0 gives the deterministic skeleton.
    double noise_scale = 1.0;

    void validate() const;
};

/// Identifier of the noise stream, recorded in report metadata.
inline constexpr std::string_view kPrngName = "mt19937_64+marsaglia_polar";

/// Seeded standard-normal stream: 53-bit uniforms from std::mt19937_64 fed to
/// the Marsaglia polar method. Both pieces are fully specified, so output is
/// identical across standard libraries (unlike std::normal_distribution).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double uniform();  ///< in [0, 1)
    double next();

private:
    std::mt19937_64 engine_;
    double spare_ = 0;
    bool has_spare_ = false;
};

/// Series of length n from one of the four toy processes:
///   NoisyArma: y_t = 0.6 y_{t-1} - 0.3 y_{t-2} + 0.5 e_{t-1} + e_t, y_1 = y_2 = 0
///   Seasonal:  y_t = sin(2 pi t / 20) + 0.5 eta_t, t = 1..n
///   TrendAr:   y_t = 0.01 t + 0.8 y_{t-1} + nu_t, nu ~ N(0, 0.5^2), y_0 = 0
///   Nonlinear: y_t = 0.5 y_{t-1} - 0.2 y_{t-1}^2 + xi_t, xi ~ N(0, 0.7^2), y_0 = 0
///
/// The nonlinear map has an unstable fixed point at -2.5 and diverges once a
/// shock pushes the state out of (-2.5, 5). Innovations that would do so are
/// redrawn, so the emitted path stays on the bounded branch.
TimeSeries generate(const GeneratorSpec& spec);

}  // namespace garima
