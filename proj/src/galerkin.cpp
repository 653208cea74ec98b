#include "garima/galerkin.hpp"

#include <algorithm>

namespace garima {

const char* to_string(MaMode mode) noexcept { return mode == MaMode::TwoStage ? "twostage" : "joint"; }

GalerkinSpec GalerkinSpec::poly(ModelOrder order, MaMode mode) {
    return {order, BasisSpec::poly(order.p), BasisSpec::poly(order.q), mode};
}

GalerkinSpec GalerkinSpec::with_basis(ModelOrder order, const BasisSpec& family_template, MaMode mode) {
    BasisSpec ar = family_template;
    ar.input_dim = order.p;
    ar.knots.clear();
    BasisSpec ma = family_template;
    ma.input_dim = order.q;
    ma.knots.clear();
    return {order, std::move(ar), std::move(ma), mode};
}

void GalerkinSpec::validate() const {
    order.validate();
    if (ar_basis.input_dim != order.p) {
        throw Error(ErrorCode::BadInput, "AR basis input dimension must equal p");
    }
    if (ma_basis.input_dim != order.q) {
        throw Error(ErrorCode::BadInput, "MA basis input dimension must equal q");
    }
    garima::validate(ar_basis);
    garima::validate(ma_basis);
}

namespace {

Vector differenced(const TimeSeries& window, int d) {
    if (window.size() <= static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::InsufficientData, "window too short for the differencing order");
    }
    return difference(window, d).values();
}

// Residual-lag rows r_t = (e_{t-1}, .., e_{t-q}) for t = q .. len-1.
Matrix residual_lags(const Vector& residuals, int q) {
    const Eigen::Index rows = residuals.size() - q;
    Matrix lags(rows, q);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (int j = 0; j < q; ++j) {
            lags(r, j) = residuals(r + q - j - 1);
        }
    }
    return lags;
}

double sigma2_from(double sse, std::size_t rows, std::size_t cols) {
    if (rows <= cols) {
        return 0.0;
    }
    return std::max(0.0, sse / static_cast<double>(rows - cols));
}

}  // namespace

ArStage fit_ar_stage(const TimeSeries& window, const GalerkinSpec& spec) {
    spec.validate();
    const int p = spec.order.p;
    const int q = spec.order.q;
    const Vector z = differenced(window, spec.order.d);
    const int k = basis_size(spec.ar_basis);
    if (z.size() <= std::max(p, q) + k) {
        throw Error(ErrorCode::InsufficientData, "differenced window of " + std::to_string(z.size()) +
                                                     " points is too short for max(p, q) + K = " +
                                                     std::to_string(std::max(p, q) + k));
    }

    const LagMatrix lags = build_lag_matrix(TimeSeries(z), p);
    ArStage stage;
    stage.basis = calibrate_knots(spec.ar_basis, lags.rows);
    const Matrix phi = design_rows(stage.basis, lags.rows);
    auto solution = solve_ols(phi, lags.targets);
    stage.beta = std::move(solution.coefficients);
    stage.rank = solution.rank_flag;
    stage.residuals = lags.targets - phi * stage.beta;
    stage.offset = static_cast<std::size_t>(p);
    stage.orthogonality = relative_normal_residual(phi, lags.targets, stage.beta);
    stage.sse = stage.residuals.squaredNorm();
    stage.rows = lags.size();
    return stage;
}

MaStage fit_ma_stage_two_stage(const Vector& stage1_residuals, const GalerkinSpec& spec) {
    const int q = spec.order.q;
    MaStage stage;
    stage.basis = spec.ma_basis;
    if (q == 0) {
        stage.alpha.resize(0);
        return stage;
    }
    const int l = basis_size(spec.ma_basis);
    if (stage1_residuals.size() < q + l + 1) {
        throw Error(ErrorCode::InsufficientData, "stage-two projection needs at least L + 1 rows with " +
                                                     std::to_string(q) + " residual lags");
    }
    if (!stage1_residuals.allFinite()) {
        throw Error(ErrorCode::BadInput, "stage-one residuals contain non-finite values");
    }

    const Matrix lags = residual_lags(stage1_residuals, q);
    const Vector targets = stage1_residuals.tail(lags.rows());
    stage.basis = calibrate_knots(spec.ma_basis, lags);
    const Matrix psi = design_rows(stage.basis, lags);

    const Matrix gram = gram_matrix(psi);
    const Vector load = psi.transpose() * targets;
    auto solution = solve_gram(gram, load);
    stage.alpha = std::move(solution.coefficients);
    stage.rank = solution.rank_flag;
    stage.orthogonality = relative_gram_residual(gram, load, stage.alpha);
    stage.sse = (targets - psi * stage.alpha).squaredNorm();
    stage.rows = static_cast<std::size_t>(lags.rows());
    return stage;
}

namespace {

JointStage joint_from_stage(const ArStage& ar, const TimeSeries& window, const GalerkinSpec& spec) {
    const int p = spec.order.p;
    const int q = spec.order.q;
    JointStage joint;
    if (q == 0) {
        joint.beta = ar.beta;
        joint.theta.resize(0);
        joint.rank = ar.rank;
        joint.orthogonality = ar.orthogonality;
        joint.sse = ar.sse;
        joint.rows = ar.rows;
        return joint;
    }

    const Vector z = differenced(window, spec.order.d);
    const int k = static_cast<int>(ar.beta.size());
    const Eigen::Index rows = ar.residuals.size() - q;
    if (rows < k + q + 1) {
        throw Error(ErrorCode::InsufficientData, "joint regression needs more rows than K + q columns");
    }

    // Rows t = p + q .. N-1: AR lags of z and the q preceding stage-one residuals.
    const LagMatrix lags = build_lag_matrix(TimeSeries(z), p);
    Matrix design(rows, k + q);
    design.leftCols(k) = design_rows(ar.basis, Matrix(lags.rows.bottomRows(rows)));
    design.rightCols(q) = residual_lags(ar.residuals, q);
    const Vector targets = lags.targets.tail(rows);

    auto solution = solve_ols(design, targets);
    joint.beta = solution.coefficients.head(k);
    joint.theta = solution.coefficients.tail(q);
    joint.rank = solution.rank_flag;
    joint.orthogonality = relative_normal_residual(design, targets, solution.coefficients);
    joint.sse = solution.residual_norm * solution.residual_norm;
    joint.rows = static_cast<std::size_t>(rows);
    return joint;
}

}  // namespace

JointStage fit_joint(const TimeSeries& window, const GalerkinSpec& spec) {
    return joint_from_stage(fit_ar_stage(window, spec), window, spec);
}

GalerkinFit fit_galerkin(const TimeSeries& window, const GalerkinSpec& spec) {
    GalerkinFit fit;
    const ArStage ar = fit_ar_stage(window, spec);
    fit.spec = spec;
    fit.spec.ar_basis = ar.basis;
    fit.stage1_beta = ar.beta;
    fit.stage1_residuals = ar.residuals;
    fit.residual_offset = ar.offset;
    fit.diagnostics.window_length = window.size();
    fit.diagnostics.ar_rank = ar.rank;
    fit.diagnostics.ar_orthogonality = ar.orthogonality;
    fit.diagnostics.ar_rows = ar.rows;

    const auto k = static_cast<std::size_t>(ar.beta.size());
    if (spec.ma_mode == MaMode::TwoStage) {
        const MaStage ma = fit_ma_stage_two_stage(ar.residuals, spec);
        fit.beta = ar.beta;
        fit.alpha = ma.alpha;
        fit.theta.resize(0);
        fit.spec.ma_basis = ma.basis;
        fit.diagnostics.ma_rank = ma.rank;
        fit.diagnostics.ma_orthogonality = ma.orthogonality;
        fit.diagnostics.ma_rows = ma.rows;
        fit.sigma2_hat = spec.order.q > 0 ? sigma2_from(ma.sse, ma.rows, static_cast<std::size_t>(ma.alpha.size()))
                                          : sigma2_from(ar.sse, ar.rows, k);
        return fit;
    }

    const JointStage joint = joint_from_stage(ar, window, spec);
    fit.beta = joint.beta;
    fit.theta = joint.theta;
    fit.alpha.resize(0);
    if (spec.order.q > 0) {
        fit.diagnostics.ma_rank = joint.rank;
        fit.diagnostics.ma_orthogonality = joint.orthogonality;
        fit.diagnostics.ma_rows = joint.rows;
    }
    fit.sigma2_hat = sigma2_from(joint.sse, joint.rows, k + static_cast<std::size_t>(spec.order.q));
    return fit;
}

double forecast_one_step(const GalerkinFit& fit, const TimeSeries& history) {
    const auto& spec = fit.spec;
    const int p = spec.order.p;
    const int q = spec.order.q;
    const int d = spec.order.d;
    if (fit.beta.size() != basis_size(spec.ar_basis) || fit.stage1_beta.size() != fit.beta.size()) {
        throw Error(ErrorCode::BadInput, "AR coefficient length does not match the AR basis");
    }
    if (q > 0 && spec.ma_mode == MaMode::TwoStage && fit.alpha.size() != basis_size(spec.ma_basis)) {
        throw Error(ErrorCode::BadInput, "MA coefficient length does not match the MA basis");
    }
    if (q > 0 && spec.ma_mode == MaMode::Joint && fit.theta.size() != q) {
        throw Error(ErrorCode::BadInput, "joint MA coefficient length must equal q");
    }
    if (history.size() <= static_cast<std::size_t>(d) || history.size() < static_cast<std::size_t>(d + p + q)) {
        throw Error(ErrorCode::InsufficientHistory, "history must supply p lags and q residual lags");
    }

    const Vector z = difference(history, d).values();
    const Eigen::Index m = z.size();
    auto lag_vector = [&](Eigen::Index t) {
        Vector x(p);
        for (int i = 0; i < p; ++i) {
            x(i) = z(t - i - 1);
        }
        return x;
    };

    double value = eval_basis(spec.ar_basis, lag_vector(m)).dot(fit.beta);
    if (q > 0) {
        Vector r(q);
        for (int j = 1; j <= q; ++j) {
            const Eigen::Index s = m - j;
            r(j - 1) = z(s) - eval_basis(spec.ar_basis, lag_vector(s)).dot(fit.stage1_beta);
        }
        value += spec.ma_mode == MaMode::TwoStage ? eval_basis(spec.ma_basis, r).dot(fit.alpha) : r.dot(fit.theta);
    }
    return integrate_forecast(history, d, value);
}

}  // namespace garima
