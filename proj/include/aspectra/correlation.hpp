#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "aspectra/matrix.hpp"
#include "aspectra/table.hpp"

namespace aspectra {

enum class CorrelationMethod { Pearson, Spearman };

std::string_view to_string(CorrelationMethod method) noexcept;
CorrelationMethod parse_correlation_method(std::string_view text);

struct CorrelationMatrix {
    SquareMatrix values;
    CorrelationMethod method = CorrelationMethod::Spearman;

    std::size_t size() const noexcept { return values.size(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values(i, j); }
};

/// Mid-ranks (1-based, ties share their mean rank).
std::vector<double> average_ranks(std::span<const double> x);

/// Throws Error{ZeroVarianceColumn} for constant columns.
CorrelationMatrix correlation_matrix(const NumericTable& table, CorrelationMethod method);

/// Correlation of two equal-length vectors; NaN when either is constant.
double correlation(std::span<const double> x, std::span<const double> y, CorrelationMethod method);

/// d(i, j) = 1 - |r(i, j)|.
SquareMatrix cor_distance(const CorrelationMatrix& corr);

}  // namespace aspectra
