#include "aspectra/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "aspectra/error.hpp"

namespace aspectra {
namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

class Svg {
public:
    explicit Svg(const RenderSpec& spec) {
        out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
        out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(spec.width) +
                "\" height=\"" + num(spec.height) + "\" viewBox=\"0 0 " + num(spec.width) + " " + num(spec.height) +
                "\" font-family=\"sans-serif\" font-size=\"" + num(spec.font_size) + "\">\n";
        out_ += "<rect x=\"0\" y=\"0\" width=\"" + num(spec.width) + "\" height=\"" + num(spec.height) +
                "\" fill=\"white\"/>\n";
    }

    void text(double x, double y, const std::string& s, const char* cls, const char* anchor = "start",
              double size = 0) {
        out_ += "<text class=\"" + std::string(cls) + "\" x=\"" + num(x) + "\" y=\"" + num(y) +
                "\" text-anchor=\"" + anchor + "\" dominant-baseline=\"middle\"";
        if (size > 0) out_ += " font-size=\"" + num(size) + "\"";
        out_ += ">" + escape(s) + "</text>\n";
    }
    void rect(double x, double y, double w, double h, const char* cls, const std::string& fill) {
        out_ += "<rect class=\"" + std::string(cls) + "\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
                num(w) + "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"/>\n";
    }
    void line(double x1, double y1, double x2, double y2, const char* cls, const std::string& stroke,
              double width = 1) {
        out_ += "<line class=\"" + std::string(cls) + "\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
                num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
                "\"/>\n";
    }
    void raw(const std::string& s) { out_ += s; }

    std::string finish() {
        out_ += "</svg>\n";
        return std::move(out_);
    }

private:
    std::string out_;
};

struct Panel {
    double x;
    double w;
};

// Maps values onto [x0, x0 + w] over a range that always includes zero.
struct ValueScale {
    double lo;
    double hi;
    double x0;
    double w;

    static ValueScale over(const std::vector<double>& values, double x0, double w) {
        double lo = 0.0, hi = 0.0;
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return {lo, hi, x0, w};
    }
    double operator()(double v) const { return hi > lo ? x0 + (v - lo) / (hi - lo) * w : x0; }
};

}  // namespace

std::string value_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

void validate(const RenderSpec& spec) {
    const double plot_w = spec.width - spec.margin_left - spec.margin_right - 2 * spec.panel_gap;
    const double plot_h = spec.height - spec.margin_top - spec.margin_bottom;
    if (!(spec.width > 0 && spec.height > 0 && spec.font_size > 0 && spec.panel_gap >= 0 && plot_w > 0 &&
          plot_h > 0 && spec.margin_left >= 0 && spec.margin_right >= 0 && spec.margin_top >= 0 &&
          spec.margin_bottom >= 0)) {
        throw Error(Errc::InvalidArgument, "render geometry must leave a positive plotting area");
    }
}

std::string render_triplot(const TriplotResult& result, const RenderSpec& spec) {
    validate(spec);
    const std::size_t p = result.column_names.size();
    const auto& merges = result.tree.merges();
    const auto order = result.tree.leaf_order();

    const double top = spec.margin_top;
    const double plot_h = spec.height - spec.margin_top - spec.margin_bottom;
    const double row_h = plot_h / static_cast<double>(p);
    const double panel_w = (spec.width - spec.margin_left - spec.margin_right - 2 * spec.panel_gap) / 3.0;
    const Panel left{spec.margin_left, panel_w};
    const Panel middle{left.x + panel_w + spec.panel_gap, panel_w};
    const Panel right{middle.x + panel_w + spec.panel_gap, panel_w};

    // Row centre of each column, following the dendrogram's leaf order.
    std::vector<double> row_y(p);
    for (std::size_t r = 0; r < p; ++r) row_y[order[r]] = top + (static_cast<double>(r) + 0.5) * row_h;

    // y of every tree node: leaves at their row, merges midway between children.
    std::vector<double> node_y(2 * p - 1);
    for (std::size_t j = 0; j < p; ++j) node_y[j] = row_y[j];
    for (std::size_t t = 0; t < merges.size(); ++t) {
        node_y[p + t] = 0.5 * (node_y[merges[t].left] + node_y[merges[t].right]);
    }

    Svg svg(spec);
    const std::string title = std::string("Triplot (") + std::string(to_string(result.mode)) + ")";
    svg.text(spec.width / 2, 16, title, "title", "middle", spec.font_size + 3);
    const double header_y = top - 14;
    svg.text(left.x + left.w / 2, header_y, "Individual importance", "panel-title", "middle");
    svg.text(middle.x + middle.w / 2, header_y, "Group importance by merge step", "panel-title", "middle");
    svg.text(right.x + right.w / 2, header_y, "Correlation dendrogram", "panel-title", "middle");

    // Left panel: names and leaf bars.
    const double label_w = left.w * 0.3;
    const double value_w = left.w * 0.15;
    const auto leaf_scale = ValueScale::over(result.leaf_importance, left.x + label_w, left.w - label_w - value_w);
    const double zero_x = leaf_scale(0.0);
    svg.line(zero_x, top, zero_x, top + plot_h, "zero-line", "#999999");
    for (std::size_t r = 0; r < p; ++r) {
        const std::size_t j = order[r];
        const double v = result.leaf_importance[j];
        const double y = row_y[j];
        const double bh = row_h * 0.6;
        const double x1 = leaf_scale(v);
        svg.text(left.x + label_w - 4, y, result.column_names[j], "leaf-name", "end");
        svg.rect(std::min(zero_x, x1), y - bh / 2, std::abs(x1 - zero_x), bh, "bar", spec.bar_color);
        svg.text(std::max(zero_x, x1) + 3, y, value_label(v), "bar-label");
    }
    if (result.full_model_loss && result.baseline_loss) {
        svg.text(left.x, top + plot_h + 18,
                 "full model loss " + value_label(*result.full_model_loss) + ", baseline " +
                     value_label(*result.baseline_loss),
                 "caption");
    }

    // Middle panel: each column's cluster position across merge steps.
    const std::size_t steps = merges.size();
    const double mx0 = middle.x + 20;
    const double mw = middle.w - 60;
    auto step_x = [&](std::size_t s) {
        return steps == 0 ? mx0 : mx0 + static_cast<double>(s) / static_cast<double>(steps) * mw;
    };
    // cluster[j] = node currently holding column j.
    std::vector<std::size_t> cluster(p);
    for (std::size_t j = 0; j < p; ++j) cluster[j] = j;
    std::vector<std::string> paths(p);
    for (std::size_t j = 0; j < p; ++j) paths[j] = "M" + num(step_x(0)) + "," + num(node_y[j]);
    for (std::size_t t = 0; t < steps; ++t) {
        const double x = step_x(t + 1);
        for (std::size_t j : merges[t].members) cluster[j] = p + t;
        for (std::size_t j = 0; j < p; ++j) {
            paths[j] += " H" + num(x) + " V" + num(node_y[cluster[j]]);
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        svg.raw("<path class=\"trajectory\" d=\"" + paths[j] + "\" fill=\"none\" stroke=\"" + spec.stroke_color +
                "\" stroke-opacity=\"0.5\"/>\n");
    }
    double max_abs = 0.0;
    for (double v : result.node_importance) max_abs = std::max(max_abs, std::abs(v));
    for (std::size_t t = 0; t < steps; ++t) {
        const double v = result.node_importance[t];
        const double radius = 2.0 + (max_abs > 0 ? 6.0 * std::abs(v) / max_abs : 0.0);
        const double x = step_x(t + 1);
        const double y = node_y[p + t];
        svg.raw("<circle class=\"node\" cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(radius) +
                "\" fill=\"" + spec.bar_color + "\"/>\n");
        svg.text(x + radius + 2, y - radius - 2, value_label(v), "node-label");
    }
    svg.text(middle.x + middle.w / 2, top + plot_h + 18, "merge step", "axis-title", "middle");

    // Right panel: dendrogram, x axis shows correlation = 1 - height.
    const double dx0 = right.x + 10;
    const double dw = right.w - 30;
    auto height_x = [&](double h) { return dx0 + std::clamp(h, 0.0, 1.0) * dw; };
    std::vector<double> node_x(2 * p - 1, height_x(0.0));
    for (std::size_t t = 0; t < steps; ++t) {
        const auto& m = merges[t];
        const double x = height_x(m.height);
        node_x[p + t] = x;
        svg.raw("<path class=\"junction\" d=\"M" + num(node_x[m.left]) + "," + num(node_y[m.left]) + " H" + num(x) +
                " V" + num(node_y[m.right]) + " H" + num(node_x[m.right]) + "\" fill=\"none\" stroke=\"" +
                spec.stroke_color + "\"/>\n");
    }
    const double axis_y = top + plot_h + 4;
    svg.line(dx0, axis_y, dx0 + dw, axis_y, "axis", "#333333");
    for (int k = 0; k <= 4; ++k) {
        const double h = k / 4.0;
        const double x = height_x(h);
        svg.line(x, axis_y, x, axis_y + 4, "tick", "#333333");
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", 1.0 - h);
        svg.text(x, axis_y + 12, buf, "tick-label", "middle");
    }
    svg.text(dx0 + dw / 2, axis_y + 26, "correlation (1 - height)", "axis-title", "middle");

    return svg.finish();
}

std::string render_aspects(const AspectExplanation& explanation, const RenderSpec& spec) {
    validate(spec);
    const std::size_t m = explanation.aspects.size();
    const double top = spec.margin_top;
    const double plot_h = spec.height - spec.margin_top - spec.margin_bottom;
    const double row_h = m ? plot_h / static_cast<double>(m) : plot_h;
    const double inner_w = spec.width - spec.margin_left - spec.margin_right;
    const double label_w = inner_w * 0.3;
    const double value_pad = inner_w * 0.08;
    const double chart_x = spec.margin_left + label_w + value_pad;
    const double half = (inner_w - label_w - 2 * value_pad) / 2.0;
    const double zero_x = chart_x + half;

    double max_abs = 0.0;
    for (const auto& a : explanation.aspects) max_abs = std::max(max_abs, std::abs(a.contribution));
    const double scale = max_abs > 0 ? half / max_abs : 0.0;

    Svg svg(spec);
    std::string title = "Aspect contributions";
    if (explanation.lambda) title += " (lasso, lambda " + value_label(*explanation.lambda) + ")";
    svg.text(spec.width / 2, 16, title, "title", "middle", spec.font_size + 3);
    svg.line(zero_x, top, zero_x, top + plot_h, "zero-line", "#333333");
    for (std::size_t r = 0; r < m; ++r) {
        const auto& a = explanation.aspects[r];
        const double y = top + (static_cast<double>(r) + 0.5) * row_h;
        const double bh = row_h * 0.6;
        const double w = std::abs(a.contribution) * scale;
        const double x = a.contribution < 0 ? zero_x - w : zero_x;
        svg.text(spec.margin_left + label_w - 4, y, a.name, "aspect-name", "end");
        svg.rect(x, y - bh / 2, w, bh, "bar", a.contribution < 0 ? "#f05a71" : spec.bar_color);
        if (a.contribution < 0) {
            svg.text(x - 3, y, value_label(a.contribution), "bar-label", "end");
        } else {
            svg.text(x + w + 3, y, value_label(a.contribution), "bar-label");
        }
    }
    return svg.finish();
}

}  // namespace aspectra
