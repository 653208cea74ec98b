#include "garima/arima.hpp"

#include "garima/linalg.hpp"
#include "garima/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace garima {

namespace {

bool params_finite(const ArimaParams& params) {
    return std::isfinite(params.intercept) && params.psi.allFinite() && params.theta.allFinite();
}

// Packed layout: [c?, psi_1..psi_p, theta_1..theta_q].
ArimaParams unpack(const Vector& x, bool intercept, int p, int q) {
    const int offset = intercept ? 1 : 0;
    return {intercept ? x(0) : 0.0, x.segment(offset, p), x.segment(offset + p, q)};
}

}  // namespace

Vector css_residuals(const ArimaParams& params, std::span<const double> diffed) {
    const auto p = static_cast<std::size_t>(params.psi.size());
    const auto q = static_cast<std::size_t>(params.theta.size());
    const std::size_t start = std::max(p, q);
    const std::size_t n = diffed.size();
    Vector eps = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t t = start; t < n; ++t) {
        double e = diffed[t] - params.intercept;
        for (std::size_t i = 0; i < p; ++i) {
            e -= params.psi(static_cast<Eigen::Index>(i)) * diffed[t - i - 1];
        }
        for (std::size_t j = 0; j < q; ++j) {
            e -= params.theta(static_cast<Eigen::Index>(j)) * eps(static_cast<Eigen::Index>(t - j - 1));
        }
        eps(static_cast<Eigen::Index>(t)) = e;
    }
    return eps;
}

double css_loss_differenced(const ArimaParams& params, std::span<const double> diffed) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!params_finite(params)) {
        return inf;
    }
    const auto p = static_cast<std::size_t>(params.psi.size());
    const auto q = static_cast<std::size_t>(params.theta.size());
    const std::size_t start = std::max(p, q);
    const std::size_t n = diffed.size();
    if (n <= start) {
        throw Error(ErrorCode::InsufficientData, "differenced window must be longer than max(p, q)");
    }

    // Ring of the last q residuals; pre-sample residuals are zero.
    double ring[64] = {};
    std::vector<double> ring_heap;
    double* eps = ring;
    if (q > 64) {
        ring_heap.assign(q, 0.0);
        eps = ring_heap.data();
    }
    std::size_t head = 0;  // position of eps_{t-1}
    double loss = 0;
    for (std::size_t t = start; t < n; ++t) {
        double e = diffed[t] - params.intercept;
        for (std::size_t i = 0; i < p; ++i) {
            e -= params.psi(static_cast<Eigen::Index>(i)) * diffed[t - i - 1];
        }
        for (std::size_t j = 0; j < q; ++j) {
            e -= params.theta(static_cast<Eigen::Index>(j)) * eps[(head + j) % q];
        }
        loss += e * e;
        if (q > 0) {
            head = (head + q - 1) % q;
            eps[head] = e;
        }
    }
    return std::isfinite(loss) ? loss : inf;
}

double css_loss(const ArimaParams& params, const TimeSeries& window, ModelOrder order) {
    if (params.psi.size() != order.p || params.theta.size() != order.q) {
        throw Error(ErrorCode::BadInput, "parameter lengths do not match the model order");
    }
    if (window.size() <= static_cast<std::size_t>(order.d)) {
        throw Error(ErrorCode::InsufficientData, "window too short for the differencing order");
    }
    const Vector z = difference(window, order.d).values();
    return css_loss_differenced(params, std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
}

ArimaFit fit_arima_css(const TimeSeries& window, ModelOrder order, const ArimaOptions& options) {
    order.validate();
    const int p = order.p;
    const int q = order.q;
    const int m = std::max(p, q);
    if (window.size() <= static_cast<std::size_t>(order.d)) {
        throw Error(ErrorCode::InsufficientData, "window too short for the differencing order");
    }
    const Vector z = difference(window, order.d).values();
    const auto n = static_cast<int>(z.size());
    if (n < m + p + q + 2) {
        throw Error(ErrorCode::InsufficientData, "CSS fit needs at least max(p, q) + p + q + 2 differenced points, got " +
                                                     std::to_string(n));
    }
    const std::span<const double> data(z.data(), static_cast<std::size_t>(n));
    const bool with_c = options.intercept;
    const int offset = with_c ? 1 : 0;
    const int dim = offset + p + q;
    const double bound = options.coefficient_bound;

    const Vector tail = z.tail(n - m);
    const double mean = tail.mean();
    const double sd = std::sqrt((tail.array() - mean).square().sum() / std::max(1, n - m - 1));

    // Warm start: OLS of z_t on [1, z_{t-1}..z_{t-p}] over the scored rows, MA at zero.
    Vector warm = Vector::Zero(dim);
    if (p > 0) {
        Matrix design(n - m, offset + p);
        for (int r = 0; r < n - m; ++r) {
            const int t = r + m;
            if (with_c) {
                design(r, 0) = 1.0;
            }
            for (int i = 0; i < p; ++i) {
                design(r, offset + i) = z(t - i - 1);
            }
        }
        const Vector coef = solve_ols(design, tail).coefficients;
        warm.head(offset + p) = coef;
        warm.segment(offset, p) = warm.segment(offset, p).cwiseMax(-bound).cwiseMin(bound);
    } else if (with_c) {
        warm(0) = mean;
    }
    // Zero-coefficient reference: the best level alone.
    Vector zero = Vector::Zero(dim);
    if (with_c) {
        zero(0) = mean;
    }

    auto objective = [&](const Vector& x) { return css_loss_differenced(unpack(x, with_c, p, q), data); };
    const Vector start = objective(warm) <= objective(zero) ? warm : zero;

    const double inf = std::numeric_limits<double>::infinity();
    Vector lower = Vector::Constant(dim, -bound);
    Vector upper = Vector::Constant(dim, bound);
    Vector step = Vector::Constant(dim, 0.1);
    if (with_c) {
        lower(0) = -inf;
        upper(0) = inf;
        step(0) = std::max({0.1 * std::abs(start(0)), 0.1 * sd, 1e-3});
    }

    NelderMeadOptions nm;
    nm.xtol = options.xtol;
    nm.max_iterations = options.iterations_per_dim * dim;
    nm.restart = true;
    const auto result = nelder_mead<double>(objective, start, step, lower, upper, nm);

    ArimaFit fit;
    fit.order = order;
    fit.has_intercept = with_c;
    const ArimaParams best = unpack(result.x, with_c, p, q);
    fit.intercept = best.intercept;
    fit.psi = best.psi;
    fit.theta = best.theta;
    fit.loss = result.value;
    fit.sigma2 = result.value / static_cast<double>(n - m);
    fit.residuals = css_residuals(best, data);
    fit.converged = result.converged;
    fit.iterations = result.iterations;
    return fit;
}

double arima_forecast_one_step(const ArimaFit& fit, const TimeSeries& history) {
    const int p = static_cast<int>(fit.psi.size());
    const int q = static_cast<int>(fit.theta.size());
    const int d = fit.order.d;
    if (history.size() <= static_cast<std::size_t>(d) ||
        history.size() < static_cast<std::size_t>(d + std::max(p, q))) {
        throw Error(ErrorCode::InsufficientHistory, "history must supply p lags and q residuals");
    }
    const Vector z = difference(history, d).values();
    const Eigen::Index m = z.size();
    const ArimaParams params = fit.params();
    const Vector eps = css_residuals(params, std::span<const double>(z.data(), static_cast<std::size_t>(m)));

    double value = params.intercept;
    for (int i = 0; i < p; ++i) {
        value += params.psi(i) * z(m - i - 1);
    }
    for (int j = 0; j < q; ++j) {
        value += params.theta(j) * eps(m - j - 1);
    }
    return integrate_forecast(history, d, value);
}

}  // namespace garima
