#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "landauer/report.hpp"

namespace landauer {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the line
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Unit strings used in axis labels.
struct PlotUnits {
  std::string time = "arb. units";
  std::string energy = "arb. units";
};

/// Panels stacked vertically in a single SVG 1.1 document. Output depends
/// only on the input values, so identical data gives identical bytes.
std::string render_svg(const std::vector<Panel>& panels);

/// Panels for a bounds table: one heat panel for undriven tables, a heat
/// panel plus a reference-parameter panel for driven ones.
/// Throws SchemaError if neither layout's columns are present.
std::vector<Panel> bounds_panels(const CsvTable& table, const PlotUnits& units);

/// Writes the plot for one bounds.csv; returns the written path.
std::filesystem::path emit_plots(const std::filesystem::path& bounds_csv, const std::filesystem::path& out_svg,
                                 const PlotUnits& units = {});

/// One coherence panel per labelled driven run.
std::filesystem::path emit_sweep_plot(const std::vector<std::pair<std::string, std::filesystem::path>>& runs,
                                      const std::filesystem::path& out_svg, const PlotUnits& units = {});

}  // namespace landauer
