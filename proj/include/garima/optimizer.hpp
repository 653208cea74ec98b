#pragma once

#include "garima/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace garima {

struct NelderMeadOptions {
    double xtol = 1e-6;        ///< converged when the simplex inf-norm diameter drops below this
    int max_iterations = 500;  ///< per run
    bool restart = true;       ///< rerun once from the best point with a fresh simplex
};

template <typename Scalar>
struct NelderMeadResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
    Scalar value = std::numeric_limits<Scalar>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Box-constrained Nelder-Mead simplex minimization. Trial points are
/// projected onto [lower, upper] before evaluation, so the objective only ever
/// sees feasible points. `step` gives the initial simplex edge per coordinate.
template <typename Scalar, typename Objective>
NelderMeadResult<Scalar> nelder_mead(Objective&& objective, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& start,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& step,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lower,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& upper,
                                     const NelderMeadOptions& options = {}) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = start.size();
    if (step.size() != n || lower.size() != n || upper.size() != n) {
        throw Error(ErrorCode::BadInput, "Nelder-Mead bounds and steps must match the start point");
    }
    auto project = [&](Vec v) -> Vec { return v.cwiseMax(lower).cwiseMin(upper); };

    NelderMeadResult<Scalar> result;
    result.x = project(start);
    result.value = objective(result.x);
    if (n == 0) {
        result.converged = true;
        return result;
    }

    const int runs = options.restart ? 2 : 1;
    for (int run = 0; run < runs; ++run) {
        std::vector<Vec> simplex(static_cast<std::size_t>(n) + 1);
        std::vector<Scalar> values(static_cast<std::size_t>(n) + 1);
        simplex[0] = result.x;
        values[0] = result.value;
        for (Eigen::Index i = 0; i < n; ++i) {
            Vec vertex = simplex[0];
            vertex(i) += step(i);
            vertex = project(vertex);
            if (vertex(i) == simplex[0](i)) {
                vertex(i) -= step(i);
                vertex = project(vertex);
            }
            simplex[static_cast<std::size_t>(i) + 1] = vertex;
            values[static_cast<std::size_t>(i) + 1] = objective(vertex);
        }

        std::vector<std::size_t> order(simplex.size());
        bool converged = false;
        int iteration = 0;
        for (; iteration < options.max_iterations; ++iteration) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second_worst = order[order.size() - 2];

            Scalar diameter = 0;
            for (const auto& vertex : simplex) {
                diameter = std::max(diameter, (vertex - simplex[best]).cwiseAbs().maxCoeff());
            }
            if (diameter < Scalar(options.xtol)) {
                converged = true;
                break;
            }

            Vec centroid = Vec::Zero(n);
            for (std::size_t i = 0; i < simplex.size(); ++i) {
                if (i != worst) {
                    centroid += simplex[i];
                }
            }
            centroid /= Scalar(n);

            const Vec reflected = project(centroid + (centroid - simplex[worst]));
            const Scalar f_reflected = objective(reflected);
            if (f_reflected < values[best]) {
                const Vec expanded = project(centroid + Scalar(2) * (centroid - simplex[worst]));
                const Scalar f_expanded = objective(expanded);
                if (f_expanded < f_reflected) {
                    simplex[worst] = expanded;
                    values[worst] = f_expanded;
                } else {
                    simplex[worst] = reflected;
                    values[worst] = f_reflected;
                }
                continue;
            }
            if (f_reflected < values[second_worst]) {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
                continue;
            }

            const bool outside = f_reflected < values[worst];
            const Vec contracted = outside ? Vec(project(centroid + Scalar(0.5) * (reflected - centroid)))
                                           : Vec(project(centroid + Scalar(0.5) * (simplex[worst] - centroid)));
            const Scalar f_contracted = objective(contracted);
            if (f_contracted < (outside ? f_reflected : values[worst])) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
                continue;
            }

            for (std::size_t i = 0; i < simplex.size(); ++i) {
                if (i != best) {
                    simplex[i] = project(simplex[best] + Scalar(0.5) * (simplex[i] - simplex[best]));
                    values[i] = objective(simplex[i]);
                }
            }
        }

        const auto best_it = std::min_element(values.begin(), values.end());
        const auto best_index = static_cast<std::size_t>(best_it - values.begin());
        if (*best_it <= result.value) {
            result.x = simplex[best_index];
            result.value = *best_it;
        }
        result.iterations += iteration;
        result.converged = converged;
    }
    return result;
}

}  // namespace garima
