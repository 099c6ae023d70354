#include "aspectra/triplot.hpp"

#include <algorithm>

#include "aspectra/error.hpp"

namespace aspectra {

std::string_view to_string(TriplotMode mode) noexcept { return mode == TriplotMode::Global ? "global" : "local"; }

TriplotMode parse_triplot_mode(std::string_view text) {
    if (text == "global") return TriplotMode::Global;
    if (text == "local") return TriplotMode::Local;
    throw Error(Errc::InvalidArgument, "unknown triplot mode '" + std::string(text) + "'");
}

MergeTree correlation_tree(const NumericTable& table, CorrelationMethod method, Linkage linkage) {
    if (table.cols() == 1) return MergeTree(1, {});
    return agglomerative(cor_distance(correlation_matrix(table, method)), linkage);
}

TriplotResult model_triplot(const Model& model, const NumericTable& table, std::span<const double> y,
                            const TriplotConfig& cfg) {
    if (cfg.mode != TriplotMode::Global) throw Error(Errc::InvalidArgument, "model_triplot needs global mode");

    TriplotResult out;
    out.mode = TriplotMode::Global;
    out.config = cfg;
    out.column_names = table.column_names();
    out.tree = correlation_tree(table, cfg.method, cfg.linkage);

    const PermutationEvaluator eval(model, table, y, cfg.permutation);
    out.rows_used = eval.rows().rows();
    out.full_model_loss = eval.full_model_loss();
    for (std::size_t j = 0; j < table.cols(); ++j) {
        const std::size_t member[] = {j};
        out.leaf_importance.push_back(eval.importance(member));
    }
    for (const auto& merge : out.tree.merges()) out.node_importance.push_back(eval.importance(merge.members));
    out.baseline_loss = eval.baseline_loss();
    return out;
}

namespace {

double contribution_of(const AspectExplanation& expl, const std::vector<std::size_t>& members) {
    for (const auto& a : expl.aspects) {
        auto sorted = a.members;
        std::sort(sorted.begin(), sorted.end());
        if (sorted == members) return a.contribution;
    }
    throw Error(Errc::InvalidArgument, "no aspect matches the requested member set");
}

}  // namespace

TriplotResult predict_triplot(const Model& model, const NumericTable& table, const Observation& x_star,
                              const TriplotConfig& cfg) {
    if (cfg.mode != TriplotMode::Local) throw Error(Errc::InvalidArgument, "predict_triplot needs local mode");

    TriplotResult out;
    out.mode = TriplotMode::Local;
    out.config = cfg;
    out.config.local.method = cfg.method;
    out.column_names = table.column_names();
    out.observation = std::vector<double>(x_star.values().begin(), x_star.values().end());
    out.tree = correlation_tree(table, cfg.method, cfg.linkage);
    out.rows_used = cfg.local.N;

    auto level = [&](const AspectPartition& partition) {
        PredictAspectsOptions opts = out.config.local;
        if (opts.limit) opts.limit = std::min(*opts.limit, partition.size());
        return predict_aspects(model, table, x_star, partition, opts);
    };

    const auto leaves = level(singleton_partition(table.column_names()));
    for (std::size_t j = 0; j < table.cols(); ++j) out.leaf_importance.push_back(contribution_of(leaves, {j}));

    const auto& merges = out.tree.merges();
    for (std::size_t t = 0; t < merges.size(); ++t) {
        const auto expl = level(cut_after_merges(out.tree, t + 1, table.column_names()));
        out.node_importance.push_back(contribution_of(expl, merges[t].members));
    }
    return out;
}

}  // namespace aspectra
