#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aspectra/aspect_importance.hpp"
#include "aspectra/matrix.hpp"

namespace aspectra {

/// Coordinate descent for
///
///     min_b  1/(2N) |y - X b|^2 + lambda |b|_1
///
/// expressed through the Gram matrix W = X^T X and Z = X^T y, with no
/// intercept and no standardization. Stops when the largest coefficient
/// change in a sweep drops below 1e-10, or after 1e5 sweeps. Coordinates with
/// W[j][j] = 0 stay at zero.
std::vector<double> lasso_coordinate_descent(const SquareMatrix& w, std::span<const double> z, std::size_t n,
                                             double lambda);

struct LassoStep {
    double lambda;
    std::size_t nonzero;
};

struct LassoFit {
    SurrogateFit fit;
    double lambda = 0.0;
    double lambda_max = 0.0;           // max_j |Z[j]| / N
    std::vector<LassoStep> trace;      // every lambda evaluated, in order
};

std::size_t count_nonzero(std::span<const double> v) noexcept;

/// Smallest lambda (to within 1e-6 * lambda_max) whose solution has at most
/// `limit` nonzero coefficients, found by bisection on [0, lambda_max].
/// limit = m returns the OLS fit with lambda = 0; limit > m is an error.
LassoFit fit_lasso(const ReplacementMatrix& x, std::span<const double> ym, std::size_t limit,
                   std::span<const std::string> names = {});
LassoFit fit_lasso(const SampleDesign& design, const DeltaPredictions& ym, std::size_t limit);

}  // namespace aspectra
