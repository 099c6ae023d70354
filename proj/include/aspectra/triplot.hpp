#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aspectra/aspect_importance.hpp"
#include "aspectra/clustering.hpp"
#include "aspectra/global_importance.hpp"
#include "aspectra/model.hpp"

namespace aspectra {

enum class TriplotMode { Global, Local };

std::string_view to_string(TriplotMode mode) noexcept;
TriplotMode parse_triplot_mode(std::string_view text);

struct TriplotConfig {
    TriplotMode mode = TriplotMode::Global;
    CorrelationMethod method = CorrelationMethod::Spearman;
    Linkage linkage = Linkage::Complete;
    PermutationConfig permutation;  // global mode
    PredictAspectsOptions local;    // local mode; `local.method` is ignored in favour of `method`
};

/// Leaf importances, one importance per merge of the correlation tree, and
/// the tree itself.
struct TriplotResult {
    TriplotMode mode = TriplotMode::Global;
    std::vector<std::string> column_names;
    MergeTree tree;
    std::vector<double> leaf_importance;  // per column
    std::vector<double> node_importance;  // per merge, aligned to tree.merges()
    TriplotConfig config;
    std::size_t rows_used = 0;            // global: rows after subsampling
    std::optional<double> full_model_loss;
    std::optional<double> baseline_loss;
    std::optional<std::vector<double>> observation;
};

/// Correlation tree of the table's columns with the configured method and linkage.
MergeTree correlation_tree(const NumericTable& table, CorrelationMethod method, Linkage linkage);

/// Global triplot: permutation importance of every column and of every merge
/// node's member set, all on one row subsample with member-keyed streams.
TriplotResult model_triplot(const Model& model, const NumericTable& table, std::span<const double> y,
                            const TriplotConfig& cfg);

/// Local triplot: predict_aspects over singletons for the leaves, then for
/// merge t the partition obtained by cutting the tree right after merge t;
/// the new cluster's contribution becomes node t's importance. Every level
/// reuses the same sampled rows.
TriplotResult predict_triplot(const Model& model, const NumericTable& table, const Observation& x_star,
                              const TriplotConfig& cfg);

}  // namespace aspectra
