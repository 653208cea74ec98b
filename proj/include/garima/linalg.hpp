#pragma once

#include "garima/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace garima {

enum class RankFlag { FullRank, Regularized };

inline const char* to_string(RankFlag flag) noexcept {
    return flag == RankFlag::FullRank ? "FullRank" : "Regularized";
}

template <typename Scalar>
struct LeastSquaresSolution {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coefficients;
    /// ||y - X b|| for solve_ols, ||G b - f|| for solve_gram.
    Scalar residual_norm = 0;
    RankFlag rank_flag = RankFlag::FullRank;
};

namespace linalg_detail {

// Relative pivot size below which a column-pivoted QR treats the design as
// rank deficient.
inline constexpr double kRankThreshold = 1e-10;
// Relative scale of the ridge term added on rank deficiency.
inline constexpr double kRidgeScale = 1e-8;
// Refinement sweeps applied after a ridge solve; each pass shrinks the
// regularization bias on well-determined directions by lambda / (s^2 + lambda).
inline constexpr int kRefinementSweeps = 6;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::BadInput, std::string(what) + " contains non-finite entries");
    }
}

}  // namespace linalg_detail

/// Least-squares solve of X b ~ y by column-pivoted Householder QR.
///
/// Rank-deficient or underdetermined designs fall back to a ridge solve with
/// lambda = 1e-8 * trace(X^T X) / K followed by a few iterated-Tikhonov
/// refinement sweeps, which converge towards the minimum-norm least-squares
/// solution. The result is then flagged Regularized. Finite input never fails.
template <typename DerivedX, typename DerivedY>
LeastSquaresSolution<typename DerivedX::Scalar> solve_ols(const Eigen::MatrixBase<DerivedX>& design,
                                                          const Eigen::MatrixBase<DerivedY>& targets) {
    using Scalar = typename DerivedX::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index n = design.rows();
    const Eigen::Index k = design.cols();
    if (n < 1 || k < 1) {
        throw Error(ErrorCode::BadInput, "least-squares design must be non-empty");
    }
    if (targets.size() != n) {
        throw Error(ErrorCode::BadInput, "target length does not match design rows");
    }
    linalg_detail::require_finite(design, "design");
    linalg_detail::require_finite(targets, "targets");

    const Mat x = design;
    const Vec y = targets;
    LeastSquaresSolution<Scalar> out;

    if (n >= k) {
        Eigen::ColPivHouseholderQR<Mat> qr(x);
        qr.setThreshold(Scalar(linalg_detail::kRankThreshold));
        if (qr.rank() == k) {
            out.coefficients = qr.solve(y);
            out.residual_norm = (y - x * out.coefficients).norm();
            return out;
        }
    }

    // Ridge: minimize ||X b - y||^2 + lambda ||b||^2 through the augmented system.
    const Scalar trace = x.squaredNorm();
    Scalar lambda = Scalar(linalg_detail::kRidgeScale) * trace / Scalar(k);
    if (!(lambda > Scalar(0))) {
        lambda = Scalar(linalg_detail::kRidgeScale);
    }
    Mat augmented(n + k, k);
    augmented.topRows(n) = x;
    augmented.bottomRows(k) = std::sqrt(lambda) * Mat::Identity(k, k);
    Eigen::HouseholderQR<Mat> qr(augmented);

    Vec rhs = Vec::Zero(n + k);
    Vec beta = Vec::Zero(k);
    for (int sweep = 0; sweep <= linalg_detail::kRefinementSweeps; ++sweep) {
        rhs.head(n) = y - x * beta;
        beta += qr.solve(rhs);
    }
    out.coefficients = std::move(beta);
    out.residual_norm = (y - x * out.coefficients).norm();
    out.rank_flag = RankFlag::Regularized;
    return out;
}

/// Solves the symmetric system G b = f (a Gram or normal-equation system).
///
/// Uses a pivoted LDL^T factorization plus one refinement step. Singular G
/// gets the same ridge policy as solve_ols. Throws BadInput when G is not
/// symmetric to 1e-10 (relative to its largest entry).
template <typename DerivedG, typename DerivedF>
LeastSquaresSolution<typename DerivedG::Scalar> solve_gram(const Eigen::MatrixBase<DerivedG>& gram,
                                                           const Eigen::MatrixBase<DerivedF>& load) {
    using Scalar = typename DerivedG::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index k = gram.rows();
    if (k < 1 || gram.cols() != k) {
        throw Error(ErrorCode::BadInput, "Gram matrix must be square and non-empty");
    }
    if (load.size() != k) {
        throw Error(ErrorCode::BadInput, "load vector length does not match Gram matrix");
    }
    linalg_detail::require_finite(gram, "Gram matrix");
    linalg_detail::require_finite(load, "load vector");

    const Mat g = gram;
    const Vec f = load;
    const Scalar scale = g.cwiseAbs().maxCoeff();
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * std::max(Scalar(1), scale)) {
        throw Error(ErrorCode::BadInput, "Gram matrix is not symmetric");
    }

    LeastSquaresSolution<Scalar> out;
    Eigen::LDLT<Mat> ldlt(g);
    bool singular = ldlt.info() != Eigen::Success || scale == Scalar(0);
    if (!singular) {
        const Vec diag = ldlt.vectorD().cwiseAbs();
        singular = diag.minCoeff() <= Scalar(1e-12) * diag.maxCoeff() * Scalar(k);
    }

    if (!singular) {
        Vec theta = ldlt.solve(f);
        theta += ldlt.solve(Vec(f - g * theta));
        out.coefficients = std::move(theta);
        out.residual_norm = (g * out.coefficients - f).norm();
        return out;
    }

    Scalar lambda = Scalar(linalg_detail::kRidgeScale) * g.trace() / Scalar(k);
    if (!(lambda > Scalar(0))) {
        lambda = Scalar(linalg_detail::kRidgeScale) * std::max(Scalar(1), scale);
    }
    Mat shifted = g;
    shifted.diagonal().array() += lambda;
    Eigen::LDLT<Mat> ridge(shifted);
    Vec theta = Vec::Zero(k);
    for (int sweep = 0; sweep <= linalg_detail::kRefinementSweeps; ++sweep) {
        theta += ridge.solve(Vec(f - g * theta));
    }
    out.coefficients = std::move(theta);
    out.residual_norm = (g * out.coefficients - f).norm();
    out.rank_flag = RankFlag::Regularized;
    return out;
}

/// Gram matrix X^T X, filled from the lower triangle so it is exactly symmetric.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> gram_matrix(
    const Eigen::MatrixBase<Derived>& design) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index k = design.cols();
    Mat g = Mat::Zero(k, k);
    g.template selfadjointView<Eigen::Lower>().rankUpdate(design.transpose());
    return Mat(g.template selfadjointView<Eigen::Lower>());
}

/// ||X^T (y - X b)||_inf / (1 + ||X^T y||_inf): the normal-equation residual
/// in the scale used by the orthogonality checks.
template <typename DerivedX, typename DerivedY, typename DerivedB>
typename DerivedX::Scalar relative_normal_residual(const Eigen::MatrixBase<DerivedX>& design,
                                                   const Eigen::MatrixBase<DerivedY>& targets,
                                                   const Eigen::MatrixBase<DerivedB>& coefficients) {
    using Vec = Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1>;
    const Vec load = design.transpose() * targets;
    const Vec residual = design.transpose() * (targets - design * coefficients);
    const auto denom = typename DerivedX::Scalar(1) + (load.size() ? load.cwiseAbs().maxCoeff() : 0);
    return residual.size() ? residual.cwiseAbs().maxCoeff() / denom : 0;
}

/// ||G b - f||_inf / (1 + ||f||_inf).
template <typename DerivedG, typename DerivedF, typename DerivedB>
typename DerivedG::Scalar relative_gram_residual(const Eigen::MatrixBase<DerivedG>& gram,
                                                 const Eigen::MatrixBase<DerivedF>& load,
                                                 const Eigen::MatrixBase<DerivedB>& coefficients) {
    if (load.size() == 0) {
        return 0;
    }
    return (gram * coefficients - load).cwiseAbs().maxCoeff() /
           (typename DerivedG::Scalar(1) + load.cwiseAbs().maxCoeff());
}

}  // namespace garima
