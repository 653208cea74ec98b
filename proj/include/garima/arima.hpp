#pragma once

#include "garima/series.hpp"
#include "garima/types.hpp"

#include <span>

namespace garima {

/// ARMA parameters on the differenced scale:
/// y_t = c + sum psi_i y_{t-i} + sum theta_j eps_{t-j} + eps_t.
struct ArimaParams {
    double intercept = 0;
    Vector psi;    ///< length p
    Vector theta;  ///< length q
};

struct ArimaOptions {
    bool intercept = true;
    double coefficient_bound = 0.99;  ///< AR/MA coefficients live in [-bound, bound]
    double xtol = 1e-6;
    int iterations_per_dim = 500;
};

struct ArimaFit {
    ModelOrder order;
    bool has_intercept = true;
    double intercept = 0;
    Vector psi;
    Vector theta;
    double sigma2 = 0;
    Vector residuals;  ///< CSS residuals over the differenced window, zero for t < max(p, q)
    bool converged = false;
    int iterations = 0;
    double loss = 0;

    ArimaParams params() const { return {intercept, psi, theta}; }
};

/// CSS residual recursion over an already differenced series.
Vector css_residuals(const ArimaParams& params, std::span<const double> diffed);

/// Sum of squared residuals for t >= max(p, q) on a differenced series.
/// Non-finite parameters (or an overflowing recursion) give +infinity.
double css_loss_differenced(const ArimaParams& params, std::span<const double> diffed);

/// css_loss_differenced on difference(window, order.d).
double css_loss(const ArimaParams& params, const TimeSeries& window, ModelOrder order);

/// Conditional-sum-of-squares fit by box-constrained Nelder-Mead, warm-started
/// from an OLS regression on the AR lags. Non-convergence is reported, not thrown.
ArimaFit fit_arima_css(const TimeSeries& window, ModelOrder order, const ArimaOptions& options = {});

/// c + sum psi_i y_{t+1-i} + sum theta_j eps_{t+1-j}, integrated back through
/// d differences. Residuals are rebuilt from `history` with the fitted
/// parameters, so `history` may be the fit window or any later extension of it.
double arima_forecast_one_step(const ArimaFit& fit, const TimeSeries& history);

}  // namespace garima
