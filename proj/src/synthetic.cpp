#include "garima/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace garima {

std::string dataset_name(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::NoisyArma: return "Noisy_ARMA";
        case GeneratorKind::Seasonal: return "Seasonal";
        case GeneratorKind::TrendAr: return "Trend_AR";
        case GeneratorKind::Nonlinear: return "Nonlinear";
    }
    return "unknown";
}

std::string kind_slug(GeneratorKind kind) {
    std::string name = dataset_name(kind);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    return name;
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto kind : {GeneratorKind::NoisyArma, GeneratorKind::Seasonal, GeneratorKind::TrendAr,
                      GeneratorKind::Nonlinear}) {
        if (lowered == kind_slug(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

void GeneratorSpec::validate() const {
    if (n < 3) {
        throw Error(ErrorCode::BadInput, "generated series need n >= 3");
    }
    if (!std::isfinite(noise_scale) || noise_scale < 0) {
        throw Error(ErrorCode::BadInput, "noise scale must be finite and non-negative");
    }
}

double NormalStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0;
    double v = 0;
    double s = 0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

TimeSeries generate(const GeneratorSpec& spec) {
    spec.validate();
    NormalStream noise(spec.seed);
    const double scale = spec.noise_scale;
    const auto n = static_cast<Eigen::Index>(spec.n);
    Vector y = Vector::Zero(n);

    switch (spec.kind) {
        case GeneratorKind::NoisyArma: {
            // y(0), y(1) hold y_1 = y_2 = 0; the shock e_2 feeding y_3 comes from the stream.
            double previous_shock = scale * noise.next();
            for (Eigen::Index i = 2; i < n; ++i) {
                const double shock = scale * noise.next();
                y(i) = 0.6 * y(i - 1) - 0.3 * y(i - 2) + 0.5 * previous_shock + shock;
                previous_shock = shock;
            }
            break;
        }
        case GeneratorKind::Seasonal: {
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto t = static_cast<double>(i + 1);
                y(i) = std::sin(2.0 * std::numbers::pi * t / 20.0) + 0.5 * scale * noise.next();
            }
            break;
        }
        case GeneratorKind::TrendAr: {
            double previous = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto t = static_cast<double>(i + 1);
                previous = 0.01 * t + 0.8 * previous + 0.5 * scale * noise.next();
                y(i) = previous;
            }
            break;
        }
        case GeneratorKind::Nonlinear: {
            constexpr double lower = -2.5;  // unstable fixed point of 0.5x - 0.2x^2
            constexpr double upper = 5.0;   // maps onto the unstable point
            double previous = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double drift = 0.5 * previous - 0.2 * previous * previous;
                double next = drift + 0.7 * scale * noise.next();
                while (!(next > lower && next < upper)) {
                    next = drift + 0.7 * scale * noise.next();
                }
                y(i) = previous = next;
            }
            break;
        }
    }
    return TimeSeries(std::move(y), SeriesMeta{dataset_name(spec.kind), spec.seed});
}

}  // namespace garima
