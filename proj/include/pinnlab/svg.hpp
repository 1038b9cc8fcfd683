#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pinnlab::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 640;
  int height = 420;
  std::size_t max_points = 2000;  // longer series are downsampled for drawing
};

/// Minimal line plot: axes, min/max tick labels, one polyline per series
/// and a legend.
void write_line_plot(const std::filesystem::path& path, const std::vector<Series>& series, const PlotOptions& opts);

}  // namespace pinnlab::svg
