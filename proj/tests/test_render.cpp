#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "svg_check.hpp"

#include "aspectra/csv.hpp"
#include "aspectra/error.hpp"
#include "aspectra/model.hpp"
#include "aspectra/render.hpp"
#include "aspectra/report.hpp"
#include "aspectra/triplot.hpp"

using namespace aspectra;

namespace {

TriplotResult two_variable_result() {
    TriplotResult r;
    r.mode = TriplotMode::Global;
    r.column_names = {"alpha", "beta"};
    r.tree = MergeTree(2, {Merge{0, 1, 0.2, {0, 1}}});
    r.leaf_importance = {1.25, 0.5};
    r.node_importance = {2.0};
    r.full_model_loss = 1.0;
    r.baseline_loss = 3.0;
    return r;
}

TriplotResult six_variable_result(TriplotMode mode) {
    auto loaded = load_table(oracle::data_file("six_vars.csv"), "value");
    const auto m = fit_linear(loaded.table, *loaded.target);
    TriplotConfig cfg;
    cfg.mode = mode;
    cfg.permutation = {.B = 2, .seed = 3};
    cfg.local = {.N = 500, .seed = 3};
    if (mode == TriplotMode::Global) return model_triplot(m, loaded.table, *loaded.target, cfg);
    return predict_triplot(m, loaded.table, Observation::from_row(loaded.table, 0), cfg);
}

AspectExplanation explanation(std::vector<std::pair<std::string, double>> items) {
    AspectExplanation e;
    for (std::size_t k = 0; k < items.size(); ++k) {
        e.aspects.push_back({items[k].first, {k}, items[k].second, 1.0, true});
        e.column_names.push_back(items[k].first);
        e.observation.push_back(0.0);
    }
    return e;
}

bool contains(const std::vector<std::string>& texts, const std::string& s) {
    return std::find(texts.begin(), texts.end(), s) != texts.end();
}

}  // namespace

TEST_CASE("value_label formatting") {
    CHECK(value_label(1.23456) == "1.235");
    CHECK(value_label(-0.0) == "0.000");
    CHECK(value_label(-0.0001) == "0.000");
    CHECK(value_label(-2.5) == "-2.500");
    CHECK(value_label(0.0) == "0.000");
}

TEST_CASE("two-variable triplot structure") {
    const auto svg = render_triplot(two_variable_result());
    const auto doc = svgcheck::parse(svg);
    REQUIRE_MESSAGE(doc.well_formed, doc.error);
    CHECK(doc.count("bar") == 2);
    CHECK(doc.count("node-label") == 1);
    CHECK(doc.count("junction") == 1);
    CHECK(doc.count("trajectory") == 2);
    const auto texts = doc.texts();
    for (const char* s : {"1.250", "0.500", "2.000", "alpha", "beta"}) CHECK(contains(texts, s));
    CHECK(render_triplot(two_variable_result()) == svg);
}

TEST_CASE("six-variable triplot structure and labels") {
    for (auto mode : {TriplotMode::Global, TriplotMode::Local}) {
        const auto r = six_variable_result(mode);
        const auto svg = render_triplot(r);
        const auto doc = svgcheck::parse(svg);
        REQUIRE_MESSAGE(doc.well_formed, doc.error);
        CHECK(doc.count("bar") == 6);
        CHECK(doc.count("node-label") == 5);
        CHECK(doc.count("junction") == 5);
        const auto texts = doc.texts();
        for (double v : r.leaf_importance) CHECK(contains(texts, value_label(v)));
        for (double v : r.node_importance) CHECK(contains(texts, value_label(v)));
        for (const auto& name : r.column_names) CHECK(contains(texts, name));
        CHECK(render_triplot(r) == svg);

        // Rendering from the serialized document gives the same picture.
        const auto reloaded = triplot_from_json(parse_json(dump_json(to_json(r))));
        CHECK(render_triplot(reloaded) == svg);
    }
}

TEST_CASE("single-variable triplot renders") {
    TriplotResult r;
    r.mode = TriplotMode::Local;
    r.column_names = {"only"};
    r.tree = MergeTree(1, {});
    r.leaf_importance = {0.75};
    r.observation = std::vector<double>{1.0};
    const auto doc = svgcheck::parse(render_triplot(r));
    REQUIRE(doc.well_formed);
    CHECK(doc.count("bar") == 1);
    CHECK(doc.count("node-label") == 0);
    CHECK(doc.count("junction") == 0);
}

TEST_CASE("names are escaped") {
    auto r = two_variable_result();
    r.column_names = {"a<b", "c&\"d\""};
    const auto doc = svgcheck::parse(render_triplot(r));
    REQUIRE_MESSAGE(doc.well_formed, doc.error);
    CHECK(contains(doc.texts(), "a<b"));
    CHECK(contains(doc.texts(), "c&\"d\""));
}

TEST_CASE("aspect chart with zero contributions") {
    const auto doc = svgcheck::parse(render_aspects(explanation({{"a", 0.0}, {"b", 0.0}, {"c", 0.0}})));
    REQUIRE(doc.well_formed);
    CHECK(doc.count("zero-line") == 1);
    REQUIRE(doc.count("bar") == 3);
    for (const auto* bar : doc.with_class("bar")) CHECK(svgcheck::number(*bar, "width") == 0.0);
}

TEST_CASE("aspect chart uses a linear diverging scale") {
    const auto doc = svgcheck::parse(render_aspects(explanation({{"up", 2.0}, {"down", -1.0}})));
    REQUIRE(doc.well_formed);
    const auto bars = doc.with_class("bar");
    REQUIRE(bars.size() == 2);
    const double zero = svgcheck::number(*doc.with_class("zero-line")[0], "x1");
    const double w_up = svgcheck::number(*bars[0], "width"), w_down = svgcheck::number(*bars[1], "width");
    CHECK(w_up > 0.0);
    CHECK(std::abs(w_up - 2.0 * w_down) < 0.02);
    CHECK(std::abs(svgcheck::number(*bars[0], "x") - zero) < 1e-9);
    CHECK(std::abs(svgcheck::number(*bars[1], "x") + w_down - zero) < 0.011);
    CHECK(contains(doc.texts(), "2.000"));
    CHECK(contains(doc.texts(), "-1.000"));
}

TEST_CASE("lasso-limited aspect chart shows at most the limit") {
    const auto t = oracle::gaussian_table(200, 9, RngStream(3, 3));
    const LinearModel m(t.column_names(), 0.0, {5, -4, 3, 2, 1, 0.5, -0.5, 0.3, 0.2});
    const auto e = predict_aspects(m, t, Observation::from_row(t, 0), singleton_partition(t.column_names()),
                                   {.N = 1000, .seed = 1, .limit = 4});
    const auto doc = svgcheck::parse(render_aspects(e));
    REQUIRE(doc.well_formed);
    std::size_t visible = 0;
    for (const auto* bar : doc.with_class("bar")) visible += svgcheck::number(*bar, "width") > 0.0 ? 1 : 0;
    CHECK(doc.count("bar") == 9);
    CHECK(visible <= 4);
    CHECK(visible >= 1);
}

TEST_CASE("render spec validation") {
    RenderSpec bad;
    bad.width = 0;
    CHECK_THROWS_AS(validate(bad), Error);
    RenderSpec cramped;
    cramped.height = 50;
    CHECK_THROWS_AS(render_triplot(two_variable_result(), cramped), Error);
    RenderSpec wide;
    wide.width = 1600;
    const auto doc = svgcheck::parse(render_triplot(two_variable_result(), wide));
    REQUIRE(doc.well_formed);
    CHECK(doc.elements[0].attrs.at("width") == "1600.00");
}
