#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aspectra/loss.hpp"
#include "aspectra/model.hpp"
#include "aspectra/partition.hpp"
#include "aspectra/rng.hpp"
#include "aspectra/table.hpp"

namespace aspectra {

struct PermutationConfig {
    std::size_t B = 10;                 // permutation repetitions
    std::optional<std::size_t> N;       // row subsample (without replacement)
    LossKind loss = LossKind::Rmse;
    std::uint64_t seed = 0;
};

struct GroupImportance {
    std::string name;
    std::vector<std::size_t> members;
    double mean_permuted_loss = 0.0;
    double importance = 0.0;  // mean_permuted_loss - full_model_loss
};

struct GlobalImportance {
    std::vector<GroupImportance> groups;
    std::vector<std::string> column_names;
    double full_model_loss = 0.0;
    double baseline_loss = 0.0;
    LossKind loss = LossKind::Rmse;
    std::size_t B = 0;
    std::size_t rows_used = 0;
    std::uint64_t seed = 0;
};

/// Applies one shared row permutation to every column in `group`; other
/// columns are untouched. Throws Error{BadIndex} for an empty group or an
/// index outside the table.
NumericTable permute_group(const NumericTable& table, std::span<const std::size_t> group, RngStream rng);

/// Stream used for repetition `rep` of the permutation of `members`.
///
/// The stream depends on the member set, not on where the set appears in a
/// partition, so the same set always sees the same permutations for a given
/// seed. In particular permuting every column reproduces the baseline.
RngStream permutation_stream(std::uint64_t seed, std::span<const std::size_t> members, std::size_t rep);

/// Permutation importance over a fixed row subsample.
///
/// Construction draws the subsample once and evaluates the unpermuted model;
/// every later query reuses both, so importances of different sets are
/// paired comparisons.
class PermutationEvaluator {
public:
    PermutationEvaluator(const Model& model, const NumericTable& table, std::span<const double> y,
                         const PermutationConfig& cfg);

    double full_model_loss() const noexcept { return full_loss_; }
    const NumericTable& rows() const noexcept { return rows_; }
    std::span<const std::size_t> row_ids() const noexcept { return row_ids_; }

    /// Loss after a single permutation of `members` with the given stream.
    double permuted_loss(std::span<const std::size_t> members, RngStream rng) const;

    /// Mean permuted loss over B repetitions. An empty set gives the full
    /// model loss exactly.
    double mean_permuted_loss(std::span<const std::size_t> members) const;

    double importance(std::span<const std::size_t> members) const {
        return mean_permuted_loss(members) - full_loss_;
    }

    /// All columns permuted jointly, averaged over B.
    double baseline_loss() const;

private:
    const Model& model_;
    PermutationConfig cfg_;
    std::vector<std::size_t> row_ids_;
    NumericTable rows_;
    std::vector<double> y_;
    double full_loss_ = 0.0;
};

GlobalImportance group_importance(const Model& model, const NumericTable& table, std::span<const double> y,
                                  const AspectPartition& groups, const PermutationConfig& cfg);

/// group_importance with one group per column.
GlobalImportance single_variable_importance(const Model& model, const NumericTable& table,
                                            std::span<const double> y, const PermutationConfig& cfg);

}  // namespace aspectra
