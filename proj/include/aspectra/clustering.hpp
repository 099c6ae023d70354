#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "aspectra/correlation.hpp"
#include "aspectra/partition.hpp"

namespace aspectra {

enum class Linkage { Complete, Single, Average };

std::string_view to_string(Linkage linkage) noexcept;
Linkage parse_linkage(std::string_view text);

/// One agglomeration step. Node ids are 0-based: leaves are 0..p-1, the
/// cluster created by merge t has id p + t.
struct Merge {
    std::size_t left;
    std::size_t right;
    double height;
    std::vector<std::size_t> members;  // sorted column indices

    bool operator==(const Merge&) const = default;
};

class MergeTree {
public:
    MergeTree() = default;
    /// Checks the structural invariants (children exist and are unused,
    /// members are unions of children, heights non-decreasing).
    MergeTree(std::size_t leaves, std::vector<Merge> merges);

    std::size_t leaf_count() const noexcept { return leaves_; }
    const std::vector<Merge>& merges() const noexcept { return merges_; }

    /// Member columns of any node id.
    std::vector<std::size_t> node_members(std::size_t node) const;

    /// Leaves in left-to-right dendrogram order.
    std::vector<std::size_t> leaf_order() const;

    bool operator==(const MergeTree&) const = default;

private:
    std::size_t leaves_ = 0;
    std::vector<Merge> merges_;
};

/// Agglomerative clustering on a distance matrix. At each step the pair of
/// active clusters with the smallest linkage distance merges; ties go to the
/// lexicographically smallest (left id, right id) with left < right.
MergeTree agglomerative(const SquareMatrix& distance, Linkage linkage);

/// Groups formed by all merges with height <= h. Groups are ordered by their
/// smallest member and named from their column names.
AspectPartition cut_tree(const MergeTree& tree, double h, const std::vector<std::string>& column_names);

/// Groups formed by the first `steps` merges, independent of heights.
AspectPartition cut_after_merges(const MergeTree& tree, std::size_t steps,
                                 const std::vector<std::string>& column_names);

/// Complete-linkage grouping where every within-group pair has |r| >= cutoff.
AspectPartition group_variables(const NumericTable& table, double cutoff,
                                CorrelationMethod method = CorrelationMethod::Spearman);

}  // namespace aspectra
