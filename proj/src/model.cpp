#include "aspectra/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "aspectra/error.hpp"

namespace aspectra {

std::vector<double> predict(const Model& model, const NumericTable& table) {
    const auto& schema = model.schema();
    if (!schema.empty() && schema != table.column_names()) {
        std::string want, got;
        for (const auto& s : schema) want += (want.empty() ? "" : ",") + s;
        for (const auto& s : table.column_names()) got += (got.empty() ? "" : ",") + s;
        throw Error(Errc::SchemaMismatch, "model '" + model.label() + "' expects [" + want + "], got [" + got + "]");
    }
    auto out = model.predict_unchecked(table);
    if (out.size() != table.rows()) {
        throw Error(Errc::SubprocessFailure, "model '" + model.label() + "' returned " + std::to_string(out.size()) +
                                                 " predictions for " + std::to_string(table.rows()) + " rows");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i])) {
            throw Error(Errc::SubprocessFailure, "model '" + model.label() + "' returned a non-finite prediction at row " +
                                                     std::to_string(i));
        }
    }
    return out;
}

LinearModel::LinearModel(std::vector<std::string> names, double intercept, std::vector<double> coefficients)
    : names_(std::move(names)), intercept_(intercept), coefficients_(std::move(coefficients)) {
    if (names_.size() != coefficients_.size()) {
        throw Error(Errc::LengthMismatch, "linear model has " + std::to_string(coefficients_.size()) +
                                              " coefficients for " + std::to_string(names_.size()) + " columns");
    }
}

LinearModel LinearModel::constant(std::vector<std::string> names, double value) {
    std::vector<double> zeros(names.size(), 0.0);
    return LinearModel(std::move(names), value, std::move(zeros));
}

std::vector<double> LinearModel::predict_unchecked(const NumericTable& table) const {
    std::vector<double> out(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        double v = intercept_;
        const auto row = table.row(i);
        for (std::size_t j = 0; j < coefficients_.size(); ++j) v += coefficients_[j] * row[j];
        out[i] = v;
    }
    return out;
}

LinearModel fit_linear(const NumericTable& table, std::span<const double> y) {
    const std::size_t n = table.rows();
    const std::size_t p = table.cols();
    if (y.size() != n) {
        throw Error(Errc::LengthMismatch, "target has " + std::to_string(y.size()) + " values for " +
                                              std::to_string(n) + " rows");
    }
    if (n <= p) {
        throw Error(Errc::RankDeficient, "need more rows than columns (n = " + std::to_string(n) +
                                             ", p = " + std::to_string(p) + ")");
    }
    Eigen::MatrixXd design(n, p + 1);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = table.at(i, j);
        }
        rhs(static_cast<Eigen::Index>(i)) = y[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < p + 1) {
        throw Error(Errc::RankDeficient, "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                                             std::to_string(p + 1) + " (collinear columns)");
    }
    const Eigen::VectorXd beta = qr.solve(rhs);
    std::vector<double> coefs(p);
    for (std::size_t j = 0; j < p; ++j) coefs[j] = beta(static_cast<Eigen::Index>(j + 1));
    return LinearModel(table.column_names(), beta(0), std::move(coefs));
}

KnnModel::KnnModel(NumericTable training, std::vector<double> targets, std::size_t k)
    : training_(std::move(training)), targets_(std::move(targets)), k_(k) {
    if (targets_.size() != training_.rows()) {
        throw Error(Errc::LengthMismatch, "target has " + std::to_string(targets_.size()) + " values for " +
                                              std::to_string(training_.rows()) + " rows");
    }
    if (k_ < 1 || k_ > training_.rows()) {
        throw Error(Errc::BadK, "k = " + std::to_string(k_) + " outside [1, " + std::to_string(training_.rows()) + "]");
    }
}

std::vector<std::size_t> KnnModel::neighbours(std::span<const double> query) const {
    std::vector<std::pair<double, std::size_t>> dist(training_.rows());
    for (std::size_t r = 0; r < training_.rows(); ++r) {
        const auto row = training_.row(r);
        double s = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double diff = row[j] - query[j];
            s += diff * diff;
        }
        dist[r] = {s, r};
    }
    // Pair ordering breaks distance ties by row index.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
    std::vector<std::size_t> ids(k_);
    for (std::size_t i = 0; i < k_; ++i) ids[i] = dist[i].second;
    return ids;
}

std::vector<double> KnnModel::predict_unchecked(const NumericTable& table) const {
    std::vector<double> out(table.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        double s = 0.0;
        for (std::size_t id : neighbours(table.row(i))) s += targets_[id];
        out[i] = s / static_cast<double>(k_);
    }
    return out;
}

KnnModel fit_knn(const NumericTable& table, std::span<const double> y, std::size_t k) {
    if (k < 1 || k > table.rows()) {
        throw Error(Errc::BadK, "k = " + std::to_string(k) + " outside [1, " + std::to_string(table.rows()) + "]");
    }
    return KnnModel(table, std::vector<double>(y.begin(), y.end()), k);
}

}  // namespace aspectra
