#include "aspectra/loss.hpp"

#include <cmath>
#include <string>

#include "aspectra/error.hpp"

namespace aspectra {

std::string_view to_string(LossKind kind) noexcept { return kind == LossKind::Rmse ? "rmse" : "mae"; }

LossKind parse_loss(std::string_view text) {
    if (text == "rmse") return LossKind::Rmse;
    if (text == "mae") return LossKind::Mae;
    throw Error(Errc::InvalidArgument, "unknown loss '" + std::string(text) + "'");
}

double loss(LossKind kind, std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size() || y.empty()) {
        throw Error(Errc::LengthMismatch, "loss over " + std::to_string(y.size()) + " and " +
                                              std::to_string(yhat.size()) + " values");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - yhat[i];
        acc += kind == LossKind::Rmse ? r * r : std::abs(r);
    }
    const double mean = acc / static_cast<double>(y.size());
    return kind == LossKind::Rmse ? std::sqrt(mean) : mean;
}

}  // namespace aspectra
