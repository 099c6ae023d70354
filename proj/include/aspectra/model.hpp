#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aspectra/table.hpp"

namespace aspectra {

/// Prediction-function contract. Implementations must be deterministic and
/// return one finite value per input row. The importance routines call
/// predict() from one task at a time per instance.
class Model {
public:
    virtual ~Model() = default;

    /// Column names (in order) the model was trained on. Empty means the model
    /// accepts any schema.
    virtual const std::vector<std::string>& schema() const = 0;
    virtual std::string label() const = 0;

protected:
    friend std::vector<double> predict(const Model& model, const NumericTable& table);
    virtual std::vector<double> predict_unchecked(const NumericTable& table) const = 0;
};

/// Evaluates a model and enforces the contract: schema match before the call,
/// row count and finiteness after. Throws Error{SchemaMismatch | SubprocessFailure}.
std::vector<double> predict(const Model& model, const NumericTable& table);

class LinearModel final : public Model {
public:
    LinearModel(std::vector<std::string> names, double intercept, std::vector<double> coefficients);

    /// Model that ignores its inputs.
    static LinearModel constant(std::vector<std::string> names, double value);

    double intercept() const noexcept { return intercept_; }
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }

    const std::vector<std::string>& schema() const override { return names_; }
    std::string label() const override { return "linear"; }

private:
    std::vector<double> predict_unchecked(const NumericTable& table) const override;

    std::vector<std::string> names_;
    double intercept_;
    std::vector<double> coefficients_;
};

/// Ordinary least squares with an intercept, solved by column-pivoted QR.
/// Throws Error{RankDeficient} when n <= p or the design is collinear.
LinearModel fit_linear(const NumericTable& table, std::span<const double> y);

/// Exhaustive k-nearest-neighbour regression (Euclidean distance). Distance
/// ties go to the lower training row index.
class KnnModel final : public Model {
public:
    KnnModel(NumericTable training, std::vector<double> targets, std::size_t k);

    std::size_t k() const noexcept { return k_; }

    const std::vector<std::string>& schema() const override { return training_.column_names(); }
    std::string label() const override { return "knn:" + std::to_string(k_); }

    /// Training row ids of the k nearest neighbours of `query`, nearest first.
    std::vector<std::size_t> neighbours(std::span<const double> query) const;

private:
    std::vector<double> predict_unchecked(const NumericTable& table) const override;

    NumericTable training_;
    std::vector<double> targets_;
    std::size_t k_;
};

/// Throws Error{BadK} unless 1 <= k <= n.
KnnModel fit_knn(const NumericTable& table, std::span<const double> y, std::size_t k);

}  // namespace aspectra
