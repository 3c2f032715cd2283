#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace difftrio::bench {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotAxes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y{false};
  bool log_x{false};
};

/// Static SVG line chart, one polyline per series, with a legend.
std::string line_plot_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes);

/// Grouped bar chart: `values[s][g]` is the bar of series s in group g.
std::string bar_chart_svg(const std::vector<std::string>& groups, const std::vector<std::string>& series,
                          const std::vector<std::vector<double>>& values, const PlotAxes& axes);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace difftrio::bench
