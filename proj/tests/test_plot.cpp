#include "support.hpp"

#include "taskrisk/error.hpp"
#include "taskrisk/plot.hpp"

#include <doctest.h>

#include <regex>

using namespace taskrisk;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("scree plot has observed and reference polylines") {
    PlotTable t{{"rank", "observed", "reference"}, {}};
    for (int r = 1; r <= 10; ++r) t.rows.push_back({double(r), 10.0 / r, 1.5 - 0.05 * r});
    const auto svg = render_svg(t, PlotKind::Scree);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(count(svg, "class=\"observed\"") == 1);
    CHECK(count(svg, "class=\"reference\"") == 1);
    CHECK(svg == render_svg(t, PlotKind::Scree));

    PlotTable one{{"rank", "observed", "reference"}, {{1, 2, 1}}};
    CHECK_THROWS_AS(render_svg(one, PlotKind::Scree), ParameterError);
    CHECK_THROWS_AS(render_svg(PlotTable{}, PlotKind::SilhouetteScan), ParameterError);
}

TEST_CASE("k-scan plot marks each k and annotates the maximum") {
    PlotTable t{{"k", "mean_silhouette", "cost_z"}, {{2, 0.4, 9}, {3, 0.7, 6}, {4, 0.5, 5}, {5, 0.45, 4}, {6, 0.3, 3}}};
    const auto svg = render_svg(t, PlotKind::SilhouetteScan);
    const std::regex marker("<circle class=\"marker\"");
    CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), marker), std::sregex_iterator()) == 5);
    CHECK(count(svg, "class=\"annotation\"") == 1);
    CHECK(svg.find("max k=3") != std::string::npos);
}

TEST_CASE("emit_plot writes identical bytes and reads tables back") {
    testing::TempDir dir("plot");
    testing::spit(dir / "kscan.csv", "k,mean_silhouette,cost_z\n2,0.5,4\n3,0.6,2\n");
    const auto table = read_plot_table(dir / "kscan.csv");
    CHECK(table.header.size() == 3);
    CHECK(table.rows.size() == 2);
    emit_plot(table, PlotKind::SilhouetteScan, dir / "a.svg");
    emit_plot(table, PlotKind::SilhouetteScan, dir / "b.svg");
    CHECK(testing::slurp(dir / "a.svg") == testing::slurp(dir / "b.svg"));
    CHECK(parse_plot_kind("scree") == PlotKind::Scree);
    CHECK(parse_plot_kind("silhouette_scan") == PlotKind::SilhouetteScan);
    CHECK_THROWS_AS(parse_plot_kind("pie"), ParameterError);
}
