#pragma once

#include <span>
#include <string_view>

namespace aspectra {

enum class LossKind { Rmse, Mae };

std::string_view to_string(LossKind kind) noexcept;
LossKind parse_loss(std::string_view text);

/// rmse = sqrt(mean((y - yhat)^2)), mae = mean(|y - yhat|).
/// Throws Error{LengthMismatch} for unequal or empty inputs.
double loss(LossKind kind, std::span<const double> y, std::span<const double> yhat);

}  // namespace aspectra
