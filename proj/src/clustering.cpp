#include "aspectra/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "aspectra/error.hpp"

namespace aspectra {

std::string_view to_string(Linkage linkage) noexcept {
    switch (linkage) {
        case Linkage::Complete: return "complete";
        case Linkage::Single: return "single";
        case Linkage::Average: return "average";
    }
    return "complete";
}

Linkage parse_linkage(std::string_view text) {
    if (text == "complete") return Linkage::Complete;
    if (text == "single") return Linkage::Single;
    if (text == "average") return Linkage::Average;
    throw Error(Errc::InvalidArgument, "unknown linkage '" + std::string(text) + "'");
}

MergeTree::MergeTree(std::size_t leaves, std::vector<Merge> merges) : leaves_(leaves), merges_(std::move(merges)) {
    if (leaves_ == 0) throw Error(Errc::InvalidArgument, "tree needs at least one leaf");
    if (merges_.size() != leaves_ - 1) {
        throw Error(Errc::InvalidArgument, "tree over " + std::to_string(leaves_) + " leaves needs " +
                                               std::to_string(leaves_ - 1) + " merges");
    }
    std::vector<bool> used(2 * leaves_ - 1, false);
    for (std::size_t t = 0; t < merges_.size(); ++t) {
        const auto& m = merges_[t];
        const std::size_t id = leaves_ + t;
        if (m.left >= id || m.right >= id || m.left == m.right || used[m.left] || used[m.right]) {
            throw Error(Errc::InvalidArgument, "merge " + std::to_string(t) + " has invalid children");
        }
        used[m.left] = used[m.right] = true;
        if (t > 0 && m.height < merges_[t - 1].height - 1e-12) {
            throw Error(Errc::InvalidArgument, "merge heights decrease at step " + std::to_string(t));
        }
        auto expect = node_members(m.left);
        auto rhs = node_members(m.right);
        expect.insert(expect.end(), rhs.begin(), rhs.end());
        std::sort(expect.begin(), expect.end());
        if (expect != m.members) {
            throw Error(Errc::InvalidArgument, "merge " + std::to_string(t) + " members are not the union of its children");
        }
    }
}

std::vector<std::size_t> MergeTree::node_members(std::size_t node) const {
    if (node < leaves_) return {node};
    return merges_.at(node - leaves_).members;
}

std::vector<std::size_t> MergeTree::leaf_order() const {
    std::vector<std::size_t> order;
    if (leaves_ == 0) return order;
    std::vector<std::size_t> stack{2 * leaves_ - 2};
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        if (node < leaves_) {
            order.push_back(node);
        } else {
            const auto& m = merges_[node - leaves_];
            stack.push_back(m.right);
            stack.push_back(m.left);
        }
    }
    return order;
}

MergeTree agglomerative(const SquareMatrix& distance, Linkage linkage) {
    const std::size_t p = distance.size();
    if (p == 0) throw Error(Errc::InvalidArgument, "empty distance matrix");
    for (std::size_t a = 0; a < p; ++a) {
        if (distance(a, a) != 0.0) throw Error(Errc::InvalidArgument, "distance matrix diagonal must be zero");
        for (std::size_t b = 0; b < p; ++b) {
            if (distance(a, b) < 0.0 || distance(a, b) != distance(b, a)) {
                throw Error(Errc::InvalidArgument, "distance matrix must be symmetric and nonnegative");
            }
        }
    }

    const std::size_t total = 2 * p - 1;
    SquareMatrix d(total, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) d(a, b) = distance(a, b);
    }
    std::vector<std::size_t> active(p);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> members(total);
    for (std::size_t a = 0; a < p; ++a) members[a] = {a};

    std::vector<Merge> merges;
    merges.reserve(p - 1);
    for (std::size_t step = 0; step + 1 < p; ++step) {
        // `active` stays sorted, so the first strict minimum is the
        // lexicographically smallest tied pair.
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t ia = 0; ia < active.size(); ++ia) {
            for (std::size_t ib = ia + 1; ib < active.size(); ++ib) {
                const double v = d(active[ia], active[ib]);
                if (v < best) {
                    best = v;
                    best_a = ia;
                    best_b = ib;
                }
            }
        }
        const std::size_t left = active[best_a];
        const std::size_t right = active[best_b];
        const std::size_t id = p + step;

        auto& joined = members[id];
        joined = members[left];
        joined.insert(joined.end(), members[right].begin(), members[right].end());
        std::sort(joined.begin(), joined.end());

        const double nl = static_cast<double>(members[left].size());
        const double nr = static_cast<double>(members[right].size());
        for (std::size_t k : active) {
            if (k == left || k == right) continue;
            double v = 0.0;
            switch (linkage) {
                case Linkage::Complete: v = std::max(d(left, k), d(right, k)); break;
                case Linkage::Single: v = std::min(d(left, k), d(right, k)); break;
                case Linkage::Average: v = (nl * d(left, k) + nr * d(right, k)) / (nl + nr); break;
            }
            d(id, k) = v;
            d(k, id) = v;
        }

        merges.push_back({left, right, best, joined});
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
        active.push_back(id);
    }
    return MergeTree(p, std::move(merges));
}

namespace {

AspectPartition partition_from_merges(const MergeTree& tree, std::size_t steps,
                                      const std::vector<std::string>& column_names) {
    const std::size_t p = tree.leaf_count();
    if (column_names.size() != p) {
        throw Error(Errc::LengthMismatch, "tree has " + std::to_string(p) + " leaves but " +
                                              std::to_string(column_names.size()) + " column names given");
    }
    // Clusters alive after `steps` merges: every node created so far that has
    // not yet been absorbed into a later one.
    std::vector<bool> absorbed(p + steps, false);
    for (std::size_t t = 0; t < steps; ++t) {
        absorbed[tree.merges()[t].left] = true;
        absorbed[tree.merges()[t].right] = true;
    }
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t node = 0; node < p + steps; ++node) {
        if (!absorbed[node]) clusters.push_back(tree.node_members(node));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    AspectPartition out;
    std::unordered_set<std::string> used;
    for (auto& members : clusters) {
        std::string name = auto_group_name(column_names, members);
        if (used.count(name)) {
            for (int k = 2;; ++k) {
                std::string candidate = name + "~" + std::to_string(k);
                if (!used.count(candidate)) {
                    name = std::move(candidate);
                    break;
                }
            }
        }
        used.insert(name);
        out.groups.push_back({std::move(name), std::move(members)});
    }
    return out;
}

}  // namespace

AspectPartition cut_tree(const MergeTree& tree, double h, const std::vector<std::string>& column_names) {
    // Heights are non-decreasing, so the merges at or below h form a prefix.
    std::size_t steps = 0;
    while (steps < tree.merges().size() && tree.merges()[steps].height <= h) ++steps;
    return partition_from_merges(tree, steps, column_names);
}

AspectPartition cut_after_merges(const MergeTree& tree, std::size_t steps,
                                 const std::vector<std::string>& column_names) {
    if (steps > tree.merges().size()) {
        throw Error(Errc::InvalidArgument, "tree has only " + std::to_string(tree.merges().size()) + " merges");
    }
    return partition_from_merges(tree, steps, column_names);
}

AspectPartition group_variables(const NumericTable& table, double cutoff, CorrelationMethod method) {
    if (!(cutoff >= 0.0 && cutoff <= 1.0)) {
        throw Error(Errc::InvalidArgument, "cutoff must lie in [0, 1]");
    }
    const auto tree = agglomerative(cor_distance(correlation_matrix(table, method)), Linkage::Complete);
    return cut_tree(tree, 1.0 - cutoff, table.column_names());
}

}  // namespace aspectra
