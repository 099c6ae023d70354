#include "aspectra/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "aspectra/error.hpp"

namespace aspectra {
namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Json member_names(const std::vector<std::size_t>& members, const std::vector<std::string>& names) {
    Json arr = Json::array();
    for (std::size_t j : members) arr.push_back(names.at(j));
    return arr;
}

std::string join_members(const std::vector<std::size_t>& members, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (k) s += ';';
        s += names.at(members[k]);
    }
    return s;
}

std::vector<std::size_t> indices_of(const Json& arr, const std::vector<std::string>& names) {
    std::unordered_map<std::string, std::size_t> lookup;
    for (std::size_t j = 0; j < names.size(); ++j) lookup.emplace(names[j], j);
    std::vector<std::size_t> out;
    for (const auto& v : arr) {
        const auto it = lookup.find(v.get<std::string>());
        if (it == lookup.end()) throw Error(Errc::SchemaMismatch, "unknown column '" + v.get<std::string>() + "'");
        out.push_back(it->second);
    }
    return out;
}

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::MalformedInput, std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
    return guarded("invalid JSON", [&] { return Json::parse(text); });
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

Json partition_to_json(const AspectPartition& partition, const std::vector<std::string>& column_names) {
    Json doc = Json::object();
    for (const auto& g : partition.groups) doc[g.name] = member_names(g.members, column_names);
    return doc;
}

AspectPartition partition_from_json(const Json& doc, const std::vector<std::string>& column_names) {
    return guarded("invalid partition document", [&] {
        if (!doc.is_object()) throw Error(Errc::MalformedInput, "partition document must be a JSON object");
        AspectPartition out;
        for (const auto& [name, cols] : doc.items()) {
            if (!cols.is_array()) throw Error(Errc::MalformedInput, "group '" + name + "' must be an array");
            out.groups.push_back({name, indices_of(cols, column_names)});
        }
        validate_partition(out, column_names.size());
        return out;
    });
}

std::string partition_to_tsv(const AspectPartition& partition, const std::vector<std::string>& column_names) {
    std::string out = "group\tmembers\n";
    for (const auto& g : partition.groups) out += g.name + "\t" + join_members(g.members, column_names) + "\n";
    return out;
}

Json tree_to_json(const MergeTree& tree) {
    Json arr = Json::array();
    for (const auto& m : tree.merges()) {
        Json members = Json::array();
        for (std::size_t j : m.members) members.push_back(j + 1);
        arr.push_back(Json{{"left", m.left + 1}, {"right", m.right + 1}, {"height", round12(m.height)},
                           {"members", members}});
    }
    return arr;
}

MergeTree tree_from_json(const Json& doc, std::size_t leaves) {
    return guarded("invalid tree document", [&] {
        std::vector<Merge> merges;
        for (const auto& m : doc) {
            Merge merge{m.at("left").get<std::size_t>() - 1, m.at("right").get<std::size_t>() - 1,
                        m.at("height").get<double>(), {}};
            for (const auto& j : m.at("members")) merge.members.push_back(j.get<std::size_t>() - 1);
            merges.push_back(std::move(merge));
        }
        return MergeTree(leaves, std::move(merges));
    });
}

Json to_json(const GlobalImportance& r) {
    Json groups = Json::array();
    for (const auto& g : r.groups) {
        groups.push_back(Json{{"group", g.name},
                              {"members", member_names(g.members, r.column_names)},
                              {"importance", g.importance},
                              {"mean_permuted_loss", g.mean_permuted_loss}});
    }
    return Json{{"kind", "global_importance"},
                {"groups", groups},
                {"metadata",
                 {{"loss", std::string(to_string(r.loss))},
                  {"full_model_loss", r.full_model_loss},
                  {"baseline_loss", r.baseline_loss},
                  {"B", r.B},
                  {"N", r.rows_used},
                  {"seed", r.seed}}}};
}

std::string to_tsv(const GlobalImportance& r) {
    std::string out;
    out += "# loss\t" + std::string(to_string(r.loss)) + "\n";
    out += "# full_model_loss\t" + fmt12(r.full_model_loss) + "\n";
    out += "# baseline_loss\t" + fmt12(r.baseline_loss) + "\n";
    out += "group\tmembers\timportance\tmean_permuted_loss\n";
    for (const auto& g : r.groups) {
        out += g.name + "\t" + join_members(g.members, r.column_names) + "\t" + fmt12(g.importance) + "\t" +
               fmt12(g.mean_permuted_loss) + "\n";
    }
    return out;
}

Json to_json(const AspectExplanation& r) {
    Json aspects = Json::array();
    for (const auto& a : r.aspects) {
        aspects.push_back(Json{{"aspect", a.name},
                               {"members", member_names(a.members, r.column_names)},
                               {"contribution", a.contribution},
                               {"min_abs_cor", a.min_abs_cor},
                               {"sign_consistent", a.sign_consistent}});
    }
    Json meta{{"N", r.N},
              {"seed", r.seed},
              {"correlation", std::string(to_string(r.method))},
              {"limit", r.limit ? Json(*r.limit) : Json(nullptr)},
              {"lambda", r.lambda ? Json(*r.lambda) : Json(nullptr)},
              {"columns", r.column_names},
              {"observation", r.observation}};
    return Json{{"kind", "aspect_importance"}, {"aspects", aspects}, {"metadata", meta}};
}

std::string to_tsv(const AspectExplanation& r) {
    std::string out;
    out += "# N\t" + std::to_string(r.N) + "\n";
    out += "# seed\t" + std::to_string(r.seed) + "\n";
    if (r.lambda) out += "# lambda\t" + fmt12(*r.lambda) + "\n";
    out += "aspect\tmembers\tcontribution\tmin_abs_cor\tsign_consistent\n";
    for (const auto& a : r.aspects) {
        out += a.name + "\t" + join_members(a.members, r.column_names) + "\t" + fmt12(a.contribution) + "\t" +
               fmt12(a.min_abs_cor) + "\t" + (a.sign_consistent ? "true" : "false") + "\n";
    }
    return out;
}

AspectExplanation explanation_from_json(const Json& doc) {
    return guarded("invalid aspect-importance document", [&] {
        AspectExplanation r;
        const auto& meta = doc.at("metadata");
        r.column_names = meta.at("columns").get<std::vector<std::string>>();
        r.observation = meta.at("observation").get<std::vector<double>>();
        r.N = meta.at("N").get<std::size_t>();
        r.seed = meta.at("seed").get<std::uint64_t>();
        r.method = parse_correlation_method(meta.at("correlation").get<std::string>());
        if (!meta.at("limit").is_null()) r.limit = meta.at("limit").get<std::size_t>();
        if (!meta.at("lambda").is_null()) r.lambda = meta.at("lambda").get<double>();
        for (const auto& a : doc.at("aspects")) {
            AspectContribution c;
            c.name = a.at("aspect").get<std::string>();
            c.members = indices_of(a.at("members"), r.column_names);
            c.contribution = a.at("contribution").get<double>();
            c.min_abs_cor = a.at("min_abs_cor").get<double>();
            c.sign_consistent = a.at("sign_consistent").get<bool>();
            r.aspects.push_back(std::move(c));
        }
        return r;
    });
}

Json to_json(const TriplotResult& r) {
    Json leaves = Json::array();
    for (std::size_t j = 0; j < r.column_names.size(); ++j) {
        leaves.push_back(Json{{"name", r.column_names[j]}, {"importance", r.leaf_importance.at(j)}});
    }
    Json nodes = Json::array();
    const auto& merges = r.tree.merges();
    for (std::size_t t = 0; t < merges.size(); ++t) {
        nodes.push_back(Json{{"members", member_names(merges[t].members, r.column_names)},
                             {"height", round12(merges[t].height)},
                             {"importance", r.node_importance.at(t)}});
    }
    Json meta{{"correlation", std::string(to_string(r.config.method))},
              {"linkage", std::string(to_string(r.config.linkage))}};
    if (r.mode == TriplotMode::Global) {
        meta["loss"] = std::string(to_string(r.config.permutation.loss));
        meta["B"] = r.config.permutation.B;
        meta["N"] = r.rows_used;
        meta["seed"] = r.config.permutation.seed;
        meta["full_model_loss"] = r.full_model_loss.value_or(0.0);
        meta["baseline_loss"] = r.baseline_loss.value_or(0.0);
    } else {
        meta["N"] = r.config.local.N;
        meta["seed"] = r.config.local.seed;
        meta["limit"] = r.config.local.limit ? Json(*r.config.local.limit) : Json(nullptr);
        meta["observation"] = r.observation.value_or(std::vector<double>{});
    }
    return Json{{"kind", "triplot"},
                {"mode", std::string(to_string(r.mode))},
                {"tree", tree_to_json(r.tree)},
                {"leaves", leaves},
                {"nodes", nodes},
                {"metadata", meta}};
}

std::string to_tsv(const TriplotResult& r) {
    std::string out = "# mode\t" + std::string(to_string(r.mode)) + "\n";
    if (r.full_model_loss) out += "# full_model_loss\t" + fmt12(*r.full_model_loss) + "\n";
    if (r.baseline_loss) out += "# baseline_loss\t" + fmt12(*r.baseline_loss) + "\n";
    out += "level\tmembers\theight\timportance\n";
    for (std::size_t j = 0; j < r.column_names.size(); ++j) {
        out += "leaf\t" + r.column_names[j] + "\t0\t" + fmt12(r.leaf_importance[j]) + "\n";
    }
    const auto& merges = r.tree.merges();
    for (std::size_t t = 0; t < merges.size(); ++t) {
        out += "node" + std::to_string(t + 1) + "\t" + join_members(merges[t].members, r.column_names) + "\t" +
               fmt12(merges[t].height) + "\t" + fmt12(r.node_importance[t]) + "\n";
    }
    return out;
}

TriplotResult triplot_from_json(const Json& doc) {
    return guarded("invalid triplot document", [&] {
        TriplotResult r;
        r.mode = parse_triplot_mode(doc.at("mode").get<std::string>());
        r.config.mode = r.mode;
        for (const auto& leaf : doc.at("leaves")) {
            r.column_names.push_back(leaf.at("name").get<std::string>());
            r.leaf_importance.push_back(leaf.at("importance").get<double>());
        }
        if (r.column_names.empty()) throw Error(Errc::MalformedInput, "triplot document has no leaves");
        r.tree = tree_from_json(doc.at("tree"), r.column_names.size());
        const auto& nodes = doc.at("nodes");
        if (nodes.size() != r.tree.merges().size()) {
            throw Error(Errc::MalformedInput, "node count does not match the tree");
        }
        for (std::size_t t = 0; t < nodes.size(); ++t) {
            auto members = indices_of(nodes[t].at("members"), r.column_names);
            std::sort(members.begin(), members.end());
            if (members != r.tree.merges()[t].members) {
                throw Error(Errc::MalformedInput, "node " + std::to_string(t + 1) + " members disagree with the tree");
            }
            r.node_importance.push_back(nodes[t].at("importance").get<double>());
        }
        const auto& meta = doc.at("metadata");
        r.config.method = parse_correlation_method(meta.at("correlation").get<std::string>());
        r.config.linkage = parse_linkage(meta.at("linkage").get<std::string>());
        if (r.mode == TriplotMode::Global) {
            r.config.permutation.loss = parse_loss(meta.at("loss").get<std::string>());
            r.config.permutation.B = meta.at("B").get<std::size_t>();
            r.config.permutation.seed = meta.at("seed").get<std::uint64_t>();
            r.rows_used = meta.at("N").get<std::size_t>();
            r.full_model_loss = meta.at("full_model_loss").get<double>();
            r.baseline_loss = meta.at("baseline_loss").get<double>();
        } else {
            r.config.local.N = meta.at("N").get<std::size_t>();
            r.config.local.seed = meta.at("seed").get<std::uint64_t>();
            if (!meta.at("limit").is_null()) r.config.local.limit = meta.at("limit").get<std::size_t>();
            r.observation = meta.at("observation").get<std::vector<double>>();
            r.rows_used = r.config.local.N;
        }
        return r;
    });
}

}  // namespace aspectra
