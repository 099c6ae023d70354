#include "aspectra/global_importance.hpp"

#include <algorithm>
#include <numeric>

#include "aspectra/error.hpp"
#include "aspectra/sampling.hpp"

namespace aspectra {
namespace {

constexpr std::uint64_t kSubsampleStream = 0x5AB5A3B1E;
constexpr std::uint64_t kPermutationStream = 0xB10C4;

std::vector<std::size_t> identity_ids(std::size_t p) {
    std::vector<std::size_t> cols(p);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return cols;
}

}  // namespace

NumericTable permute_group(const NumericTable& table, std::span<const std::size_t> group, RngStream rng) {
    if (group.empty()) throw Error(Errc::BadIndex, "cannot permute an empty group");
    for (std::size_t j : group) {
        if (j >= table.cols()) {
            throw Error(Errc::BadIndex, "column " + std::to_string(j) + " out of range (p = " +
                                            std::to_string(table.cols()) + ")");
        }
    }
    const auto perm = rng.permutation(table.rows());
    const auto src = table.values();
    std::vector<double> values(src.begin(), src.end());
    const std::size_t p = table.cols();
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j : group) values[i * p + j] = src[perm[i] * p + j];
    }
    return NumericTable(table.column_names(), std::move(values));
}

RngStream permutation_stream(std::uint64_t seed, std::span<const std::size_t> members, std::size_t rep) {
    std::vector<std::size_t> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    return RngStream(seed, kPermutationStream).substream(hash_indices(sorted)).substream(rep);
}

PermutationEvaluator::PermutationEvaluator(const Model& model, const NumericTable& table, std::span<const double> y,
                                           const PermutationConfig& cfg)
    : model_(model), cfg_(cfg), rows_(table) {
    if (y.size() != table.rows()) {
        throw Error(Errc::LengthMismatch, "target has " + std::to_string(y.size()) + " values for " +
                                              std::to_string(table.rows()) + " rows");
    }
    if (cfg_.B < 1) throw Error(Errc::InvalidArgument, "B must be at least 1");
    const std::size_t n = table.rows();
    if (cfg_.N && (*cfg_.N < 1 || *cfg_.N > n)) {
        throw Error(Errc::InvalidArgument, "N = " + std::to_string(*cfg_.N) + " outside [1, " + std::to_string(n) + "]");
    }
    if (cfg_.N && *cfg_.N < n) {
        RngStream rng(cfg_.seed, kSubsampleStream);
        row_ids_ = subsample_row_ids(n, *cfg_.N, rng);
        rows_ = table.select_rows(row_ids_);
    } else {
        row_ids_ = identity_ids(n);
    }
    y_.reserve(row_ids_.size());
    for (std::size_t id : row_ids_) y_.push_back(y[id]);
    full_loss_ = loss(cfg_.loss, y_, predict(model_, rows_));
}

double PermutationEvaluator::permuted_loss(std::span<const std::size_t> members, RngStream rng) const {
    if (members.empty()) return full_loss_;
    return loss(cfg_.loss, y_, predict(model_, permute_group(rows_, members, rng)));
}

double PermutationEvaluator::mean_permuted_loss(std::span<const std::size_t> members) const {
    if (members.empty()) return full_loss_;
    double acc = 0.0;
    for (std::size_t b = 0; b < cfg_.B; ++b) {
        acc += permuted_loss(members, permutation_stream(cfg_.seed, members, b));
    }
    return acc / static_cast<double>(cfg_.B);
}

double PermutationEvaluator::baseline_loss() const { return mean_permuted_loss(identity_ids(rows_.cols())); }

GlobalImportance group_importance(const Model& model, const NumericTable& table, std::span<const double> y,
                                  const AspectPartition& groups, const PermutationConfig& cfg) {
    validate_partition(groups, table.cols());
    const PermutationEvaluator eval(model, table, y, cfg);

    GlobalImportance out;
    out.column_names = table.column_names();
    out.full_model_loss = eval.full_model_loss();
    out.loss = cfg.loss;
    out.B = cfg.B;
    out.rows_used = eval.rows().rows();
    out.seed = cfg.seed;
    for (const auto& g : groups.groups) {
        GroupImportance gi;
        gi.name = g.name;
        gi.members = g.members;
        gi.mean_permuted_loss = eval.mean_permuted_loss(g.members);
        gi.importance = gi.mean_permuted_loss - out.full_model_loss;
        out.groups.push_back(std::move(gi));
    }
    out.baseline_loss = eval.baseline_loss();
    return out;
}

GlobalImportance single_variable_importance(const Model& model, const NumericTable& table,
                                            std::span<const double> y, const PermutationConfig& cfg) {
    return group_importance(model, table, y, singleton_partition(table.column_names()), cfg);
}

}  // namespace aspectra
