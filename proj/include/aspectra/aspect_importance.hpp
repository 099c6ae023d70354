#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aspectra/correlation.hpp"
#include "aspectra/matrix.hpp"
#include "aspectra/model.hpp"
#include "aspectra/partition.hpp"
#include "aspectra/rng.hpp"
#include "aspectra/table.hpp"

namespace aspectra {

/// N x m binary matrix X'. Entry (i, j) = 1 means aspect j of sampled row i
/// is overwritten with the explained observation's values.
class ReplacementMatrix {
public:
    ReplacementMatrix(std::size_t rows, std::size_t aspects) : rows_(rows), cols_(aspects), flags_(rows * aspects, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t aspects() const noexcept { return cols_; }

    bool at(std::size_t i, std::size_t j) const noexcept { return flags_[i * cols_ + j] != 0; }
    void set(std::size_t i, std::size_t j) noexcept { flags_[i * cols_ + j] = 1; }
    std::size_t row_count(std::size_t i) const noexcept;

    bool operator==(const ReplacementMatrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<unsigned char> flags_;
};

struct SampleDesign {
    AspectPartition partition;
    std::vector<std::size_t> row_ids;  // source rows forming A
    ReplacementMatrix x_prime;
    NumericTable a;                    // sampled rows
    NumericTable a_prime;              // sampled rows with flagged aspects replaced
};

struct DeltaPredictions {
    std::vector<double> values;  // f(A') - f(A)
};

struct SurrogateFit {
    std::vector<double> gamma;
    SquareMatrix w;          // X'^T X'
    std::vector<double> z;   // X'^T Y_m
    double residual_norm = 0.0;
};

/// Samples N rows with replacement, then for every row draws two aspect
/// indices uniformly with replacement and flags both (one flag when they
/// coincide). Rows come from rng.substream(0) and flags from
/// rng.substream(1), so designs over different partitions share A.
SampleDesign build_design(const NumericTable& table, const Observation& x_star, const AspectPartition& partition,
                          std::size_t N, RngStream rng);

/// f(A') - f(A), two model calls.
DeltaPredictions delta_predictions(const Model& model, const SampleDesign& design);

/// W[i][j] = number of rows flagging both i and j (W[i][i]: rows flagging i).
SquareMatrix replacement_gram(const ReplacementMatrix& x);

/// Z[i] = sum over rows flagging i of Y_m.
std::vector<double> replacement_cross(const ReplacementMatrix& x, std::span<const double> ym);

/// Least squares without intercept: gamma = W^-1 Z. Throws
/// Error{SingularDesign} naming the aspects that were never flagged or are
/// collinear; `names` is used only for that message.
SurrogateFit fit_ols(const ReplacementMatrix& x, std::span<const double> ym,
                     std::span<const std::string> names = {});
SurrogateFit fit_ols(const SampleDesign& design, const DeltaPredictions& ym);

struct AspectContribution {
    std::string name;
    std::vector<std::size_t> members;
    double contribution = 0.0;
    double min_abs_cor = 1.0;      // 1 for singletons
    bool sign_consistent = true;   // every within-aspect correlation has one sign
};

struct AspectExplanation {
    std::vector<AspectContribution> aspects;  // by |contribution|, largest first
    std::vector<std::string> column_names;
    std::vector<double> observation;
    std::size_t N = 0;
    std::uint64_t seed = 0;
    CorrelationMethod method = CorrelationMethod::Spearman;
    std::optional<std::size_t> limit;
    std::optional<double> lambda;
};

struct PredictAspectsOptions {
    std::size_t N = 1000;
    std::uint64_t seed = 0;
    std::optional<std::size_t> limit;  // lasso cap on nonzero contributions
    CorrelationMethod method = CorrelationMethod::Spearman;
};

/// Either explicit aspects or a correlation cutoff handed to group_variables.
using Grouping = std::variant<AspectPartition, double>;

/// Stream the explainer derives its design from for a given seed.
RngStream aspect_stream(std::uint64_t seed);

/// Local aspect importance for one observation.
AspectExplanation predict_aspects(const Model& model, const NumericTable& table, const Observation& x_star,
                                  const Grouping& grouping, const PredictAspectsOptions& options);

}  // namespace aspectra
