#include "aspectra/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>

#include "CLI11.hpp"

#include "aspectra/aspect_importance.hpp"
#include "aspectra/clustering.hpp"
#include "aspectra/csv.hpp"
#include "aspectra/error.hpp"
#include "aspectra/global_importance.hpp"
#include "aspectra/model.hpp"
#include "aspectra/render.hpp"
#include "aspectra/report.hpp"
#include "aspectra/subprocess_model.hpp"
#include "aspectra/triplot.hpp"

namespace aspectra {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string data;
    std::optional<std::string> target;
    std::optional<std::string> model;
    std::optional<std::string> groups;
    std::optional<double> cutoff;
    std::string method = "spearman";
    std::string linkage = "complete";
    std::string loss = "rmse";
    std::string mode;
    std::size_t B = 10;
    std::optional<std::size_t> N;
    std::uint64_t seed = 0;
    std::optional<std::size_t> limit;
    std::optional<std::size_t> row;
    std::optional<std::string> obs;
    std::string format = "json";
    std::optional<std::string> out;
    std::string in;
    double width = 1200;
    double height = 500;
};

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out) {
        std::ofstream f(*o.out, std::ios::binary);
        if (!f) throw Error(Errc::InvalidArgument, "cannot write '" + *o.out + "'");
        f << text;
    } else {
        out << text;
    }
}

std::unique_ptr<Model> make_model(const Options& o, const LoadedTable& data) {
    std::string spec;
    if (o.model) {
        spec = *o.model;
    } else if (auto cmd = model_command_from_env()) {
        spec = "cmd:" + *cmd;
    } else {
        throw UsageError("--model is required (or set " + std::string(kModelCommandEnv) + ")");
    }

    auto need_target = [&]() -> const std::vector<double>& {
        if (!data.target) throw UsageError("--model " + spec + " needs --target to train on");
        return *data.target;
    };
    if (spec == "linear") return std::make_unique<LinearModel>(fit_linear(data.table, need_target()));
    if (spec.rfind("knn:", 0) == 0) {
        std::size_t k = 0;
        const auto digits = std::string_view(spec).substr(4);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) throw UsageError("bad model '" + spec + "'");
        return std::make_unique<KnnModel>(fit_knn(data.table, need_target(), k));
    }
    if (spec.rfind("cmd:", 0) == 0 && spec.size() > 4) {
        SubprocessModel::Options opts;
        opts.schema = data.table.column_names();
        return std::make_unique<SubprocessModel>(spec.substr(4), opts);
    }
    throw UsageError("unknown model '" + spec + "' (expected linear, knn:K or cmd:COMMAND)");
}

std::optional<Grouping> grouping_of(const Options& o, const NumericTable& table) {
    if (o.groups) return Grouping(partition_from_json(read_json_file(*o.groups), table.column_names()));
    if (o.cutoff) return Grouping(*o.cutoff);
    return std::nullopt;
}

AspectPartition resolve_partition(const Options& o, const NumericTable& table) {
    const auto g = grouping_of(o, table);
    if (!g) return singleton_partition(table.column_names());
    if (std::holds_alternative<AspectPartition>(*g)) return std::get<AspectPartition>(*g);
    return group_variables(table, std::get<double>(*g), parse_correlation_method(o.method));
}

Observation observation_of(const Options& o, const NumericTable& table) {
    if (o.row && o.obs) throw UsageError("--row and --obs are mutually exclusive");
    if (o.row) return Observation::from_row(table, *o.row);
    if (!o.obs) throw UsageError("an observation is required: --row I or --obs FILE");
    const auto loaded = load_table(*o.obs);
    std::vector<double> values;
    for (const auto& name : table.column_names()) {
        const std::size_t j = loaded.table.find_column(name);
        if (j == loaded.table.cols()) throw Error(Errc::SchemaMismatch, "observation file lacks column '" + name + "'");
        values.push_back(loaded.table.at(0, j));
    }
    return Observation(std::move(values));
}

void check_format(const Options& o) {
    if (o.format != "json" && o.format != "tsv") throw UsageError("--format must be json or tsv");
}

int cmd_group_vars(const Options& o, std::ostream& out) {
    check_format(o);
    if (!o.cutoff) throw UsageError("--cutoff is required");
    const auto data = load_table(o.data, o.target);
    const auto partition = group_variables(data.table, *o.cutoff, parse_correlation_method(o.method));
    const auto& names = data.table.column_names();
    emit(o, o.format == "tsv" ? partition_to_tsv(partition, names) : dump_json(partition_to_json(partition, names)),
         out);
    return 0;
}

PermutationConfig permutation_config(const Options& o) {
    PermutationConfig cfg;
    cfg.B = o.B;
    cfg.N = o.N;
    cfg.loss = parse_loss(o.loss);
    cfg.seed = o.seed;
    return cfg;
}

int cmd_global_importance(const Options& o, std::ostream& out) {
    check_format(o);
    if (!o.target) throw UsageError("--target is required");
    if (o.groups && o.cutoff) throw UsageError("--groups and --cutoff are mutually exclusive");
    const auto data = load_table(o.data, o.target);
    const auto model = make_model(o, data);
    const auto partition = resolve_partition(o, data.table);
    const auto result = group_importance(*model, data.table, *data.target, partition, permutation_config(o));
    emit(o, o.format == "tsv" ? to_tsv(result) : dump_json(to_json(result)), out);
    return 0;
}

int cmd_predict_aspects(const Options& o, std::ostream& out) {
    check_format(o);
    if (o.groups && o.cutoff) throw UsageError("--groups and --cutoff are mutually exclusive");
    const auto data = load_table(o.data, o.target);
    const auto model = make_model(o, data);
    const auto x_star = observation_of(o, data.table);
    PredictAspectsOptions opts;
    opts.N = o.N.value_or(1000);
    opts.seed = o.seed;
    opts.limit = o.limit;
    opts.method = parse_correlation_method(o.method);
    auto grouping = grouping_of(o, data.table);
    if (!grouping) grouping = Grouping(singleton_partition(data.table.column_names()));
    const auto result = predict_aspects(*model, data.table, x_star, *grouping, opts);
    emit(o, o.format == "tsv" ? to_tsv(result) : dump_json(to_json(result)), out);
    return 0;
}

int cmd_triplot(const Options& o, std::ostream& out) {
    check_format(o);
    TriplotConfig cfg;
    try {
        cfg.mode = parse_triplot_mode(o.mode);
    } catch (const Error&) {
        throw UsageError("--mode must be global or local");
    }
    cfg.method = parse_correlation_method(o.method);
    cfg.linkage = parse_linkage(o.linkage);
    const auto data = load_table(o.data, o.target);
    const auto model = make_model(o, data);

    TriplotResult result;
    if (cfg.mode == TriplotMode::Global) {
        if (!data.target) throw UsageError("--target is required for a global triplot");
        cfg.permutation = permutation_config(o);
        result = model_triplot(*model, data.table, *data.target, cfg);
    } else {
        cfg.local.N = o.N.value_or(1000);
        cfg.local.seed = o.seed;
        cfg.local.limit = o.limit;
        cfg.local.method = cfg.method;
        result = predict_triplot(*model, data.table, observation_of(o, data.table), cfg);
    }
    emit(o, o.format == "tsv" ? to_tsv(result) : dump_json(to_json(result)), out);
    return 0;
}

int cmd_render(const Options& o, std::ostream& out) {
    const auto doc = read_json_file(o.in);
    RenderSpec spec;
    spec.width = o.width;
    spec.height = o.height;
    const std::string kind = doc.is_object() && doc.contains("kind") && doc["kind"].is_string()
                                 ? doc["kind"].get<std::string>()
                                 : std::string();
    std::string svg;
    if (kind == "triplot") {
        svg = render_triplot(triplot_from_json(doc), spec);
    } else if (kind == "aspect_importance") {
        svg = render_aspects(explanation_from_json(doc), spec);
    } else {
        throw Error(Errc::MalformedInput, "'" + o.in + "' is neither a triplot nor an aspect-importance document");
    }
    emit(o, svg, out);
    return 0;
}

void add_data(CLI::App* sub, Options& o, bool target_required) {
    sub->add_option("--data", o.data, "CSV file with a header row")->required();
    auto* t = sub->add_option("--target", o.target, "Target column, excluded from the features");
    if (target_required) t->required();
}

void add_model(CLI::App* sub, Options& o) {
    sub->add_option("--model", o.model, "linear | knn:K | cmd:COMMAND (default: $ASPECTRA_MODEL_CMD)");
}

void add_grouping(CLI::App* sub, Options& o) {
    sub->add_option("--groups", o.groups, "JSON object mapping group name to column names");
    sub->add_option("--cutoff", o.cutoff, "Group columns whose pairwise |correlation| >= cutoff")
        ->check(CLI::Range(0.0, 1.0));
}

void add_output(CLI::App* sub, Options& o) {
    sub->add_option("--format", o.format, "json or tsv")->capture_default_str()->check(CLI::IsMember({"json", "tsv"}));
    sub->add_option("--out", o.out, "Write to a file instead of standard output");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const CLI::IsMember kMethods({"pearson", "spearman"});
    const CLI::IsMember kLosses({"rmse", "mae"});
    Options o;
    CLI::App app{"Aspect importance and triplots for tabular prediction models", "aspectra"};
    app.require_subcommand(1, 1);

    auto* group_vars = app.add_subcommand("group-vars", "Group correlated columns");
    add_data(group_vars, o, false);
    group_vars->add_option("--method", o.method, "pearson or spearman")->capture_default_str()->check(kMethods);
    add_grouping(group_vars, o);
    add_output(group_vars, o);

    auto* global = app.add_subcommand("global-importance", "Permutation importance of variable groups");
    add_data(global, o, true);
    add_model(global, o);
    add_grouping(global, o);
    global->add_option("--method", o.method, "Correlation for --cutoff")->capture_default_str()->check(kMethods);
    global->add_option("--B", o.B, "Permutation repetitions")->capture_default_str()->check(CLI::PositiveNumber);
    global->add_option("--N", o.N, "Row subsample size");
    global->add_option("--seed", o.seed)->capture_default_str();
    global->add_option("--loss", o.loss, "rmse or mae")->capture_default_str()->check(kLosses);
    add_output(global, o);

    auto* aspects = app.add_subcommand("predict-aspects", "Aspect contributions to one prediction");
    add_data(aspects, o, false);
    add_model(aspects, o);
    aspects->add_option("--row", o.row, "Explain this data row (0-based)");
    aspects->add_option("--obs", o.obs, "CSV whose first row is the observation to explain");
    add_grouping(aspects, o);
    aspects->add_option("--method", o.method, "Correlation method")->capture_default_str()->check(kMethods);
    aspects->add_option("--N", o.N, "Number of sampled rows (default 1000)");
    aspects->add_option("--seed", o.seed)->capture_default_str();
    aspects->add_option("--limit", o.limit, "Keep at most this many nonzero contributions (lasso)");
    add_output(aspects, o);

    auto* triplot = app.add_subcommand("triplot", "Single-variable, group and correlation-tree importances");
    triplot->add_option("--mode", o.mode, "global or local")->required()->check(CLI::IsMember({"global", "local"}));
    add_data(triplot, o, false);
    add_model(triplot, o);
    triplot->add_option("--method", o.method, "pearson or spearman")->capture_default_str()->check(kMethods);
    triplot->add_option("--linkage", o.linkage, "complete, single or average")
        ->capture_default_str()
        ->check(CLI::IsMember({"complete", "single", "average"}));
    triplot->add_option("--B", o.B, "Permutation repetitions (global)")->capture_default_str()->check(CLI::PositiveNumber);
    triplot->add_option("--N", o.N, "Row subsample (global) or sample size (local, default 1000)");
    triplot->add_option("--seed", o.seed)->capture_default_str();
    triplot->add_option("--loss", o.loss, "rmse or mae (global)")->capture_default_str()->check(kLosses);
    triplot->add_option("--row", o.row, "Explain this data row (local, 0-based)");
    triplot->add_option("--obs", o.obs, "CSV whose first row is the observation (local)");
    triplot->add_option("--limit", o.limit, "Lasso cap per level (local)");
    add_output(triplot, o);

    auto* render = app.add_subcommand("render", "Render a result document as SVG");
    render->add_option("--in", o.in, "Triplot or aspect-importance JSON")->required();
    render->add_option("--out", o.out, "SVG output file (default: standard output)");
    render->add_option("--width", o.width)->capture_default_str();
    render->add_option("--height", o.height)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (group_vars->parsed()) return cmd_group_vars(o, out);
        if (global->parsed()) return cmd_global_importance(o, out);
        if (aspects->parsed()) return cmd_predict_aspects(o, out);
        if (triplot->parsed()) return cmd_triplot(o, out);
        if (render->parsed()) return cmd_render(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace aspectra
