#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace taskrisk {

enum class PlotKind { Scree, SilhouetteScan };

PlotKind parse_plot_kind(std::string_view text);

/// Numeric table: column 0 is the x value (rank or k), later columns are series.
struct PlotTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Renders a deterministic SVG document.
///   scree:           columns rank, observed, reference -> two polylines; needs >= 2 rows
///   silhouette_scan: columns k, mean_silhouette[, cost_z] -> one marker per k, best k annotated
std::string render_svg(const PlotTable& table, PlotKind kind);

void emit_plot(const PlotTable& table, PlotKind kind, const std::filesystem::path& path);

PlotTable read_plot_table(const std::filesystem::path& path);

}  // namespace taskrisk
