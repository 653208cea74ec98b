#include "garima/basis.hpp"

#include <algorithm>
#include <cmath>

namespace garima {

void validate(const BasisSpec& spec) {
    if (spec.input_dim < 0) {
        throw Error(ErrorCode::BadInput, "basis input dimension must be non-negative");
    }
    if (spec.family == BasisFamily::BSpline) {
        if (spec.degree < 0) {
            throw Error(ErrorCode::BadInput, "B-spline degree must be non-negative");
        }
        if (spec.knot_count < 2) {
            throw Error(ErrorCode::BadInput, "B-spline basis needs at least two knots");
        }
        for (const auto& breaks : spec.knots) {
            if (breaks.size() != spec.knot_count) {
                throw Error(ErrorCode::BadInput, "B-spline knot vector has the wrong length");
            }
            for (Eigen::Index i = 1; i < breaks.size(); ++i) {
                if (!(breaks(i) > breaks(i - 1))) {
                    throw Error(ErrorCode::BadInput, "B-spline knots must be strictly increasing");
                }
            }
        }
    }
}

int basis_size(const BasisSpec& spec) {
    if (spec.input_dim == 0) {
        return 1;
    }
    if (spec.family == BasisFamily::PolySquares) {
        return 2 * spec.input_dim + 1;
    }
    return spec.input_dim * bspline_functions_per_dim(spec);
}

namespace {

// Linear-interpolated empirical quantile of sorted data (type 7).
double quantile(const std::vector<double>& sorted, double prob) {
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Vector place_breaks(std::vector<double> column, int count) {
    std::sort(column.begin(), column.end());
    double lo = column.front();
    double hi = column.back();
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    Vector breaks(count);
    for (int i = 0; i < count; ++i) {
        breaks(i) = quantile(column, static_cast<double>(i) / static_cast<double>(count - 1));
    }
    breaks(0) = lo;
    breaks(count - 1) = hi;
    for (int i = 1; i < count; ++i) {
        if (!(breaks(i) > breaks(i - 1))) {
            // Tied quantiles (heavily repeated values): fall back to uniform spacing.
            breaks = Vector::LinSpaced(count, lo, hi);
            break;
        }
    }
    return breaks;
}

}  // namespace

BasisSpec calibrate_knots(BasisSpec spec, const Matrix& samples) {
    validate(spec);
    if (spec.family != BasisFamily::BSpline || spec.input_dim == 0) {
        return spec;
    }
    if (samples.cols() != spec.input_dim || samples.rows() < 1) {
        throw Error(ErrorCode::BadInput, "knot calibration samples must have input_dim columns and >= 1 row");
    }
    if (!samples.allFinite()) {
        throw Error(ErrorCode::BadInput, "knot calibration samples contain non-finite values");
    }
    spec.knots.clear();
    for (Eigen::Index c = 0; c < samples.cols(); ++c) {
        std::vector<double> column(samples.col(c).data(), samples.col(c).data() + samples.rows());
        spec.knots.push_back(place_breaks(std::move(column), spec.knot_count));
    }
    return spec;
}

std::vector<std::string> basis_labels(const BasisSpec& spec, const std::string& variable) {
    std::vector<std::string> labels;
    if (spec.input_dim == 0) {
        labels.emplace_back("1");
        return labels;
    }
    if (spec.family == BasisFamily::PolySquares) {
        labels.emplace_back("1");
        for (int i = 1; i <= spec.input_dim; ++i) {
            labels.push_back(variable + "[t-" + std::to_string(i) + "]");
        }
        for (int i = 1; i <= spec.input_dim; ++i) {
            labels.push_back(variable + "[t-" + std::to_string(i) + "]^2");
        }
        return labels;
    }
    for (int i = 1; i <= spec.input_dim; ++i) {
        for (int j = 0; j < bspline_functions_per_dim(spec); ++j) {
            labels.push_back("B" + std::to_string(j) + "(" + variable + "[t-" + std::to_string(i) + "])");
        }
    }
    return labels;
}

Matrix design_rows(const BasisSpec& spec, const Matrix& rows) {
    const int k = basis_size(spec);
    if (rows.cols() != spec.input_dim) {
        throw Error(ErrorCode::BadInput, "lag rows have " + std::to_string(rows.cols()) + " columns, basis expects " +
                                             std::to_string(spec.input_dim));
    }
    Matrix design(rows.rows(), k);
    if (spec.input_dim == 0) {
        design.setOnes();
        return design;
    }
    if (spec.family == BasisFamily::PolySquares) {
        if (!rows.allFinite()) {
            throw Error(ErrorCode::BadInput, "basis input contains non-finite values");
        }
        const int n = spec.input_dim;
        design.col(0).setOnes();
        design.middleCols(1, n) = rows;
        design.middleCols(n + 1, n) = rows.array().square().matrix();
        return design;
    }
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        design.row(r) = eval_basis(spec, rows.row(r).transpose()).transpose();
    }
    return design;
}

BasisMatrix build_design(const BasisSpec& spec, const LagMatrix& lags) {
    if (lags.size() == 0) {
        throw Error(ErrorCode::BadInput, "cannot build a design from an empty lag matrix");
    }
    return {design_rows(spec, lags.rows), basis_labels(spec, "y")};
}

}  // namespace garima
