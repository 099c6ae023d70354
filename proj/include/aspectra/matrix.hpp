#pragma once

#include <cstddef>
#include <vector>

namespace aspectra {

/// Dense p x p matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t p, double fill = 0.0) : p_(p), values_(p * p, fill) {}

    std::size_t size() const noexcept { return p_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * p_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * p_ + j]; }

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t p_ = 0;
    std::vector<double> values_;
};

}  // namespace aspectra
