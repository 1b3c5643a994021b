#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stationplot/embedding.hpp"
#include "stationplot/hull.hpp"
#include "stationplot/stats.hpp"

namespace stationplot {

struct PlotStyle {
  int width = 640;
  int height = 480;
  double point_radius = 2.0;
  // Class tag -> fill color. Unlisted tags draw from a fixed fallback
  // palette in first-seen order, so output stays deterministic.
  std::map<std::string, std::string> class_colors = {
      {"healthy", "#2ca02c"},
      {"seizure", "#1f77b4"},
  };
  int margin = 56;
  int axis_tick_count = 5;
};

void validate_style(const PlotStyle& style);

// Scatter plot of an embedded cloud with axes and tick labels. A 2D cloud
// fills the frame; a 3D cloud is drawn as three orthogonal projections side
// by side. When a hull is given it is overlaid on the (first, second)
// coordinate panel as a single closed polygon.
std::string render_stationplot(const PointCloud& cloud, const ConvexHull2D* hull,
                               const PlotStyle& style,
                               const std::string& class_label = "");

// One box-and-whisker glyph per (label, summary) pair, left to right in
// input order, outliers as distinct marks.
std::string render_boxplot(
    const std::vector<std::pair<std::string, BoxplotSummary>>& summaries,
    const PlotStyle& style, const std::string& value_axis_label = "");

}  // namespace stationplot
