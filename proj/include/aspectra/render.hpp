#pragma once

#include <string>

#include "aspectra/aspect_importance.hpp"
#include "aspectra/triplot.hpp"

namespace aspectra {

struct RenderSpec {
    double width = 1200;
    double height = 500;
    double margin_top = 50;
    double margin_bottom = 40;
    double margin_left = 10;
    double margin_right = 10;
    double font_size = 11;
    double panel_gap = 10;
    std::string bar_color = "#4378bf";
    std::string stroke_color = "#371ea3";
};

/// Throws Error{InvalidArgument} for non-positive geometry.
void validate(const RenderSpec& spec);

/// Three panels sharing one row per variable (dendrogram leaf order):
/// leaf-importance bars on the left, group-importance trajectories across
/// merge steps in the middle, and the correlation dendrogram on the right.
///
/// Elements carry classes so the output can be checked structurally:
/// `bar` (one per variable), `node-label` (one per merge) and `junction`
/// (one per merge). Output bytes depend only on the inputs.
std::string render_triplot(const TriplotResult& result, const RenderSpec& spec = {});

/// Diverging horizontal bars, positive to the right of the `zero-line`,
/// in the explanation's order.
std::string render_aspects(const AspectExplanation& explanation, const RenderSpec& spec = {});

/// "%.3f" with negative zero printed as "0.000"; the format of every value
/// label.
std::string value_label(double v);

}  // namespace aspectra
