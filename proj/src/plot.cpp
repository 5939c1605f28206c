#include "taskrisk/plot.hpp"

#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace taskrisk {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 60;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;

struct Frame {
    double x_min, x_max, y_min, y_max;

    double x(double v) const {
        const double span = x_max > x_min ? x_max - x_min : 1.0;
        return kLeft + (v - x_min) / span * (kWidth - kLeft - kRight);
    }
    double y(double v) const {
        const double span = y_max > y_min ? y_max - y_min : 1.0;
        return kHeight - kBottom - (v - y_min) / span * (kHeight - kTop - kBottom);
    }
};

std::string num(double v) { return fmt::format("{:.2f}", v); }

Frame frame_for(const PlotTable& t, std::size_t first_series, std::size_t last_series) {
    Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& r : t.rows) {
        f.x_min = std::min(f.x_min, r[0]);
        f.x_max = std::max(f.x_max, r[0]);
        for (std::size_t c = first_series; c <= last_series; ++c) {
            f.y_min = std::min(f.y_min, r[c]);
            f.y_max = std::max(f.y_max, r[c]);
        }
    }
    const double pad = (f.y_max - f.y_min) * 0.05;
    f.y_min -= pad;
    f.y_max += pad;
    return f;
}

void open_document(std::string& svg, const std::string& title, const Frame& f, const std::string& x_label,
                   const std::string& y_label) {
    svg += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
        kWidth, kHeight, kWidth, kHeight);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += fmt::format("<text class=\"title\" x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
                       num(kWidth / 2), title);
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    svg += fmt::format("<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", num(x0),
                       num(y0), num(x1), num(y0));
    svg += fmt::format("<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", num(x0),
                       num(y0), num(x0), num(y1));
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n", num((x0 + x1) / 2),
                       num(kHeight - 12), x_label);
    svg += fmt::format(
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        num((y0 + y1) / 2), num((y0 + y1) / 2), y_label);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{}</text>\n", num(x0 - 4),
                       num(y0), fmt::format("{:.3g}", f.y_min));
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"10\">{}</text>\n", num(x0 - 4),
                       num(y1 + 4), fmt::format("{:.3g}", f.y_max));
}

void x_ticks(std::string& svg, const PlotTable& t, const Frame& f) {
    for (const auto& r : t.rows) {
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\">{}</text>\n", num(f.x(r[0])),
                           num(kHeight - kBottom + 14), fmt::format("{:g}", r[0]));
    }
}

std::string polyline(const PlotTable& t, const Frame& f, std::size_t column, const char* cls, const char* stroke,
                     const char* dash) {
    std::string points;
    for (const auto& r : t.rows) {
        if (!points.empty()) points += ' ';
        points += num(f.x(r[0])) + ',' + num(f.y(r[column]));
    }
    return fmt::format("<polyline class=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{} points=\"{}\"/>\n", cls,
                       stroke, dash, points);
}

void check_table(const PlotTable& t, std::size_t min_columns) {
    for (const auto& r : t.rows) {
        if (r.size() < min_columns) throw ParameterError(fmt::format("plot rows need at least {} columns", min_columns));
        for (double v : r) {
            if (!std::isfinite(v)) throw ParameterError("plot table contains a non-finite value");
        }
    }
}

}  // namespace

PlotKind parse_plot_kind(std::string_view text) {
    if (text == "scree") return PlotKind::Scree;
    if (text == "silhouette_scan" || text == "kscan") return PlotKind::SilhouetteScan;
    throw ParameterError(fmt::format("unknown plot kind '{}'", text));
}

std::string render_svg(const PlotTable& table, PlotKind kind) {
    if (table.rows.empty()) throw ParameterError("plot table is empty");
    std::string svg;
    if (kind == PlotKind::Scree) {
        if (table.rows.size() < 2) throw ParameterError("scree plot needs at least two ranks");
        check_table(table, 3);
        const auto f = frame_for(table, 1, 2);
        open_document(svg, "Parallel analysis scree", f, "factor rank", "eigenvalue");
        x_ticks(svg, table, f);
        svg += polyline(table, f, 1, "observed", "#1f4e9c", "");
        svg += polyline(table, f, 2, "reference", "#c0392b", " stroke-dasharray=\"6 4\"");
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#1f4e9c\">observed</text>\n",
                           num(kWidth - kRight - 120), num(kTop + 10));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#c0392b\">random reference</text>\n",
                           num(kWidth - kRight - 120), num(kTop + 24));
    } else {
        check_table(table, 2);
        const auto f = frame_for(table, 1, 1);
        open_document(svg, "Mean silhouette by k", f, "k", "mean silhouette");
        x_ticks(svg, table, f);
        std::size_t best = 0;
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            if (table.rows[i][1] > table.rows[best][1]) best = i;
        }
        if (table.rows.size() >= 2) svg += polyline(table, f, 1, "scan", "#7f8c8d", "");
        for (const auto& r : table.rows) {
            svg += fmt::format("<circle class=\"marker\" cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#1f4e9c\"/>\n", num(f.x(r[0])),
                               num(f.y(r[1])));
        }
        const auto& b = table.rows[best];
        svg += fmt::format("<text class=\"annotation\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">max k={:g} ({:.3f})</text>\n",
                           num(f.x(b[0])), num(f.y(b[1]) - 10), b[0], b[1]);
    }
    svg += "</svg>\n";
    return svg;
}

void emit_plot(const PlotTable& table, PlotKind kind, const std::filesystem::path& path) {
    const auto svg = render_svg(table, kind);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PathError(path.string(), "cannot write");
    out << svg;
}

PlotTable read_plot_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PathError(path.string());
    const Table t = read_table(in);
    PlotTable out;
    out.header = t.header;
    for (const auto& row : t.rows) {
        std::vector<double> values;
        for (const auto& f : row.fields) {
            const auto v = parse_number(f);
            if (!v) throw ValidationError({{row.line, fmt::format("non-numeric plot value '{}'", f)}});
            values.push_back(*v);
        }
        out.rows.push_back(std::move(values));
    }
    return out;
}

}  // namespace taskrisk
