#include "garima/arima.hpp"
#include "garima/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace garima {
namespace {

TimeSeries from(const std::vector<double>& v) { return TimeSeries(std::span<const double>(v)); }

ArimaParams params(double c, std::vector<double> psi, std::vector<double> theta) {
    ArimaParams out;
    out.intercept = c;
    out.psi = Eigen::Map<const Vector>(psi.data(), static_cast<Eigen::Index>(psi.size()));
    out.theta = Eigen::Map<const Vector>(theta.data(), static_cast<Eigen::Index>(theta.size()));
    return out;
}

// Direct ARMA simulation with its own innovation stream.
std::vector<double> simulate_arma(std::uint64_t seed, int n, double c, std::vector<double> psi,
                                  std::vector<double> theta, double sigma) {
    NormalStream stream(seed);
    const int burn = 200;
    std::vector<double> y(static_cast<std::size_t>(n + burn), 0.0);
    std::vector<double> e(y.size(), 0.0);
    for (std::size_t t = 0; t < y.size(); ++t) {
        e[t] = sigma * stream.next();
        double v = c + e[t];
        for (std::size_t i = 0; i < psi.size(); ++i) {
            if (t > i) {
                v += psi[i] * y[t - i - 1];
            }
        }
        for (std::size_t j = 0; j < theta.size(); ++j) {
            if (t > j) {
                v += theta[j] * e[t - j - 1];
            }
        }
        y[t] = v;
    }
    return {y.begin() + burn, y.end()};
}

// Plain re-statement of the CSS loss with explicit indices.
double oracle_css(const ArimaParams& prm, const std::vector<double>& z) {
    const auto p = static_cast<std::size_t>(prm.psi.size());
    const auto q = static_cast<std::size_t>(prm.theta.size());
    const std::size_t m = std::max(p, q);
    std::vector<double> eps(z.size(), 0.0);
    double loss = 0;
    for (std::size_t t = m; t < z.size(); ++t) {
        double pred = prm.intercept;
        for (std::size_t i = 1; i <= p; ++i) {
            pred += prm.psi(static_cast<Eigen::Index>(i - 1)) * z[t - i];
        }
        for (std::size_t j = 1; j <= q; ++j) {
            pred += prm.theta(static_cast<Eigen::Index>(j - 1)) * eps[t - j];
        }
        eps[t] = z[t] - pred;
        loss += eps[t] * eps[t];
    }
    return loss;
}

TEST(CssLoss, ExactAutoregression) {
    std::vector<double> y{1.0};
    for (int i = 1; i < 60; ++i) {
        y.push_back(0.6 * y.back());
    }
    EXPECT_EQ(css_loss(params(0, {0.6}, {}), from(y), {1, 0, 0}), 0.0);
}

TEST(CssLoss, ZeroWindow) {
    const TimeSeries zeros = from(std::vector<double>(30, 0.0));
    EXPECT_EQ(css_loss(params(0, {0.3, -0.7}, {0.9}), zeros, {2, 0, 1}), 0.0);
    EXPECT_EQ(css_loss(params(0, {}, {0.4, 0.2, 0.1}), zeros, {0, 0, 3}), 0.0);
}

TEST(CssLoss, NonFiniteParametersGiveInfinity) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 50, 1});
    EXPECT_EQ(css_loss(params(std::nan(""), {0.5}, {}), s, {1, 0, 0}), std::numeric_limits<double>::infinity());
    EXPECT_EQ(css_loss(params(0, {0.5}, {INFINITY}), s, {1, 0, 1}), std::numeric_limits<double>::infinity());
}

TEST(CssLoss, MatchesIndexOracle) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 120, 8});
    const std::vector<double> z(s.values().data(), s.values().data() + s.size());
    for (const auto& prm : {params(0.1, {0.6, -0.3}, {0.5}), params(-0.2, {0.2}, {0.1, -0.4, 0.3, 0.2, 0.1}),
                            params(0, {0.9, 0, 0, 0, -0.1}, {0.3})}) {
        const ModelOrder order{static_cast<int>(prm.psi.size()), 0, static_cast<int>(prm.theta.size())};
        EXPECT_NEAR(css_loss(prm, s, order), oracle_css(prm, z), 1e-9 * oracle_css(prm, z));
    }
}

TEST(CssLoss, TrueParametersBeatPerturbed) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 2000, 42});
    const double at_truth = css_loss(params(0, {0.6, -0.3}, {0.5}), s, {2, 0, 1});
    const double perturbed = css_loss(params(0, {0.8, -0.3}, {0.5}), s, {2, 0, 1});
    EXPECT_LT(at_truth, perturbed);
}

TEST(CssLoss, PreSampleValuesUntouched) {
    // p = 1, q = 5: scoring starts at t = 5 and reads y back to t = 4 only.
    std::vector<double> y(80);
    const TimeSeries base = generate({GeneratorKind::Seasonal, 80, 3});
    std::copy(base.values().data(), base.values().data() + 80, y.begin());
    const ArimaParams prm = params(0.2, {0.5}, {0.3, 0.1, -0.2, 0.05, 0.1});
    const double before = css_loss(prm, from(y), {1, 0, 5});
    for (int i = 0; i < 4; ++i) {
        y[static_cast<std::size_t>(i)] = 1e6 * (i + 1);
    }
    EXPECT_EQ(css_loss(prm, from(y), {1, 0, 5}), before);
    y[4] += 1.0;
    EXPECT_NE(css_loss(prm, from(y), {1, 0, 5}), before);
}

TEST(CssResiduals, RecursionReconstructsFitResiduals) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 100, 5});
    const ArimaFit fit = fit_arima_css(s, {2, 0, 1});
    const Vector& e = fit.residuals;
    const Vector& y = s.values();
    ASSERT_EQ(e.size(), y.size());
    EXPECT_EQ(e(0), 0.0);
    EXPECT_EQ(e(1), 0.0);
    for (Eigen::Index t = 2; t < y.size(); ++t) {
        const double pred = fit.intercept + fit.psi(0) * y(t - 1) + fit.psi(1) * y(t - 2) + fit.theta(0) * e(t - 1);
        EXPECT_NEAR(e(t), y(t) - pred, 1e-12);
    }
    EXPECT_NEAR(e.squaredNorm(), fit.loss, 1e-9 * fit.loss);
    EXPECT_NEAR(fit.sigma2, fit.loss / 98.0, 1e-12);
}

TEST(FitArima, RejectsEmptyOrder) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 100, 5});
    EXPECT_THROW(fit_arima_css(s, {0, 0, 0}), Error);
}

TEST(FitArima, InsufficientData) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 12, 5});
    try {
        fit_arima_css(s, {5, 0, 1});  // floor is 5 + 6 + 2 = 13
        FAIL() << "expected InsufficientData";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
}

TEST(FitArima, CoefficientsStayInBox) {
    for (const auto kind : {GeneratorKind::TrendAr, GeneratorKind::Seasonal, GeneratorKind::Nonlinear}) {
        const ArimaFit fit = fit_arima_css(generate({kind, 100, 42}), {5, 0, 1});
        EXPECT_LE(fit.psi.cwiseAbs().maxCoeff(), 0.99);
        EXPECT_LE(fit.theta.cwiseAbs().maxCoeff(), 0.99);
        EXPECT_GT(fit.iterations, 0);
    }
}

TEST(FitArima, NeverWorseThanZeroCoefficientStart) {
    for (const auto kind : {GeneratorKind::NoisyArma, GeneratorKind::Seasonal, GeneratorKind::TrendAr,
                            GeneratorKind::Nonlinear}) {
        const TimeSeries s = generate({kind, 100, 7});
        for (const ModelOrder order : {ModelOrder{1, 0, 0}, ModelOrder{0, 0, 5}, ModelOrder{1, 0, 5},
                                       ModelOrder{5, 0, 1}}) {
            const ArimaFit fit = fit_arima_css(s, order);
            const ArimaParams zero_coef{0.0, Vector::Zero(order.p), Vector::Zero(order.q)};
            const int m = std::max(order.p, order.q);
            const ArimaParams level{s.values().tail(s.size() - static_cast<std::size_t>(m)).mean(),
                                    Vector::Zero(order.p), Vector::Zero(order.q)};
            EXPECT_LE(fit.loss, css_loss(zero_coef, s, order));
            EXPECT_LE(fit.loss, css_loss(level, s, order));
        }
    }
}

TEST(FitArima, AutoregressionSamplingBand) {
    // psi* = 0.8, sigma = 0.5, N = 100. The CSS sampling distribution puts
    // about 94% of its mass in [0.65, 0.92], so at least 90% of 50 seeds must land there.
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto y = simulate_arma(seed, 100, 0.0, {0.8}, {}, 0.5);
        const ArimaFit fit = fit_arima_css(from(y), {1, 0, 0});
        inside += fit.psi(0) >= 0.65 && fit.psi(0) <= 0.92;
    }
    EXPECT_GE(inside, 45);
}

TEST(FitArima, WhiteNoiseNullBand) {
    int inside = 0;
    for (std::uint64_t seed = 101; seed <= 200; ++seed) {
        const auto y = simulate_arma(seed, 100, 0.0, {}, {}, 1.0);
        const ArimaFit fit = fit_arima_css(from(y), {1, 0, 0});
        inside += std::abs(fit.psi(0)) <= 0.35;
    }
    EXPECT_GE(inside, 95);
}

TEST(FitArima, NoiselessFitThenForecast) {
    std::vector<double> y{10.0};
    for (int i = 1; i < 101; ++i) {
        y.push_back(0.95 * y.back());
    }
    const TimeSeries window = from(std::vector<double>(y.begin(), y.end() - 1));
    const ArimaFit fit = fit_arima_css(window, {1, 0, 0});
    EXPECT_LE(std::abs(arima_forecast_one_step(fit, window) - y.back()), 1e-6);
}

TEST(FitArima, DifferencedForecastOnOriginalScale) {
    // Random walk with drift: Delta y is constant, so the forecast is the next level.
    std::vector<double> y;
    for (int i = 0; i < 80; ++i) {
        y.push_back(3.0 + 0.5 * i);
    }
    const ArimaFit fit = fit_arima_css(from(y), {1, 1, 0});
    EXPECT_NEAR(arima_forecast_one_step(fit, from(y)), 3.0 + 0.5 * 80, 1e-6);
}

ArimaFit hand_fit(double c, std::vector<double> psi, std::vector<double> theta) {
    ArimaFit fit;
    const ArimaParams prm = params(c, std::move(psi), std::move(theta));
    fit.order = {static_cast<int>(prm.psi.size()), 0, static_cast<int>(prm.theta.size())};
    fit.intercept = c;
    fit.psi = prm.psi;
    fit.theta = prm.theta;
    return fit;
}

TEST(ArimaForecast, Examples) {
    EXPECT_EQ(arima_forecast_one_step(hand_fit(0, {0.5}, {}), from({1, 7, 4})), 2.0);
    EXPECT_EQ(arima_forecast_one_step(hand_fit(1.5, {0, 0}, {0}), from({9, -3, 2})), 1.5);
}

TEST(ArimaForecast, InsufficientHistory) {
    try {
        arima_forecast_one_step(hand_fit(0, {0.5, 0.1, 0.1}, {}), from({1, 2}));
        FAIL() << "expected InsufficientHistory";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientHistory);
    }
}

TEST(FitArima, Deterministic) {
    const TimeSeries s = generate({GeneratorKind::NoisyArma, 100, 19});
    const ArimaFit a = fit_arima_css(s, {1, 0, 5});
    const ArimaFit b = fit_arima_css(s, {1, 0, 5});
    EXPECT_EQ(a.psi, b.psi);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.intercept, b.intercept);
    EXPECT_EQ(a.loss, b.loss);
}

TEST(FitArima, NoInterceptOption) {
    ArimaOptions options;
    options.intercept = false;
    const ArimaFit fit = fit_arima_css(generate({GeneratorKind::NoisyArma, 100, 19}), {2, 0, 1}, options);
    EXPECT_FALSE(fit.has_intercept);
    EXPECT_EQ(fit.intercept, 0.0);
}

}  // namespace
}  // namespace garima
