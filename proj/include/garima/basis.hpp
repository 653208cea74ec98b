#pragma once

#include "garima/series.hpp"
#include "garima/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

namespace garima {

enum class BasisFamily { PolySquares, BSpline };

/// Basis evaluation map on an input_dim-dimensional lag vector.
///
/// PolySquares: [1, x_1..x_n, x_1^2..x_n^2], K = 2n + 1.
/// BSpline: per-dimension clamped B-splines of `degree` on `knot_count`
/// breakpoints, concatenated dimension by dimension; each dimension block is a
/// partition of unity, so no separate intercept column is added. Knots are
/// empty until calibrate_knots() places them on observed data.
/// input_dim = 0 is the intercept-only basis (K = 1) for either family.
struct BasisSpec {
    BasisFamily family = BasisFamily::PolySquares;
    int input_dim = 0;
    int degree = 3;
    int knot_count = 8;
    std::vector<Vector> knots;  ///< per-dimension strictly increasing breakpoints

    static BasisSpec poly(int input_dim) { return {BasisFamily::PolySquares, input_dim, 3, 8, {}}; }
    static BasisSpec bspline(int input_dim, int degree = 3, int knot_count = 8) {
        return {BasisFamily::BSpline, input_dim, degree, knot_count, {}};
    }

    bool calibrated() const noexcept {
        return family == BasisFamily::PolySquares || input_dim == 0 ||
               knots.size() == static_cast<std::size_t>(input_dim);
    }
};

/// N x K evaluated basis with a label per column.
struct BasisMatrix {
    Matrix entries;
    std::vector<std::string> col_labels;
};

/// Number of B-spline functions per dimension.
inline int bspline_functions_per_dim(const BasisSpec& spec) noexcept { return spec.knot_count - 1 + spec.degree; }

/// K, the basis dimension.
int basis_size(const BasisSpec& spec);

/// Throws BadInput for inconsistent parameters.
void validate(const BasisSpec& spec);

/// Places knots at empirical quantiles of each column of `samples`
/// (rows = observations, cols = input_dim). No-op for PolySquares.
BasisSpec calibrate_knots(BasisSpec spec, const Matrix& samples);

std::vector<std::string> basis_labels(const BasisSpec& spec, const std::string& variable);

/// Index i of the break interval [b_i, b_{i+1}) containing x; the right end
/// belongs to the last interval. x must already lie in the break range.
template <typename Scalar>
int bspline_interval(const Vector& breaks, Scalar x) {
    const int last = static_cast<int>(breaks.size()) - 1;
    if (x >= Scalar(breaks(last))) {
        return last - 1;
    }
    const auto* begin = breaks.data();
    const auto* it = std::upper_bound(begin, begin + last + 1, static_cast<double>(x));
    return static_cast<int>(it - begin) - 1;
}

/// All degree+1 non-zero B-spline values at x, written into `out` at the
/// positions of the functions they belong to. Cox-de Boor in the triangular
/// form of the NURBS book (algorithm A2.2) over a clamped knot vector.
template <typename Scalar, typename Out>
void eval_bspline_dimension(const Vector& breaks, int degree, Scalar x, Out&& out) {
    const int nbreaks = static_cast<int>(breaks.size());
    const Scalar lo = Scalar(breaks(0));
    const Scalar hi = Scalar(breaks(nbreaks - 1));
    x = std::clamp(x, lo, hi);

    // Knot u_j of the clamped vector: degree+1 copies of each end break.
    auto knot = [&](int j) -> Scalar {
        const int b = std::clamp(j - degree, 0, nbreaks - 1);
        return Scalar(breaks(b));
    };

    const int interval = bspline_interval(breaks, x);
    const int span = interval + degree;  // index in the clamped knot vector

    std::vector<Scalar> left(static_cast<std::size_t>(degree) + 1), right(static_cast<std::size_t>(degree) + 1);
    std::vector<Scalar> values(static_cast<std::size_t>(degree) + 1);
    values[0] = Scalar(1);
    for (int j = 1; j <= degree; ++j) {
        left[static_cast<std::size_t>(j)] = x - knot(span + 1 - j);
        right[static_cast<std::size_t>(j)] = knot(span + j) - x;
        Scalar saved = Scalar(0);
        for (int r = 0; r < j; ++r) {
            const Scalar denom = right[static_cast<std::size_t>(r) + 1] + left[static_cast<std::size_t>(j - r)];
            const Scalar temp = denom == Scalar(0) ? Scalar(0) : values[static_cast<std::size_t>(r)] / denom;
            values[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r) + 1] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        values[static_cast<std::size_t>(j)] = saved;
    }
    for (int r = 0; r <= degree; ++r) {
        out(span - degree + r) = values[static_cast<std::size_t>(r)];
    }
}

/// Evaluates the basis at one lag vector.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> eval_basis(const BasisSpec& spec,
                                                                      const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const int n = spec.input_dim;
    if (x.size() != n) {
        throw Error(ErrorCode::BadInput, "basis input has length " + std::to_string(x.size()) + ", expected " +
                                             std::to_string(n));
    }
    if (!x.allFinite()) {
        throw Error(ErrorCode::BadInput, "basis input contains non-finite values");
    }
    if (n == 0) {
        return Vec::Ones(1);
    }
    if (spec.family == BasisFamily::PolySquares) {
        Vec out(2 * n + 1);
        out(0) = Scalar(1);
        out.segment(1, n) = x;
        out.segment(n + 1, n) = x.array().square().matrix();
        return out;
    }
    if (!spec.calibrated()) {
        throw Error(ErrorCode::BadInput, "B-spline basis has no knots; calibrate it on data first");
    }
    const int per_dim = bspline_functions_per_dim(spec);
    Vec out = Vec::Zero(n * per_dim);
    for (int dim = 0; dim < n; ++dim) {
        eval_bspline_dimension(spec.knots[static_cast<std::size_t>(dim)], spec.degree, x(dim),
                               out.segment(dim * per_dim, per_dim));
    }
    return out;
}

/// Design matrix whose row t is eval_basis(spec, rows.row(t)).
Matrix design_rows(const BasisSpec& spec, const Matrix& rows);

/// Design matrix for a lag matrix; throws BadInput when `lags` is empty.
BasisMatrix build_design(const BasisSpec& spec, const LagMatrix& lags);

}  // namespace garima
