#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace bakerdim {

/// One scatter or line series for the self-contained SVG plots. No display
/// server, no timestamps; identical inputs give identical files.
struct PlotSeries {
  std::vector<std::pair<double, double>> points;
  std::string label;
  std::string color = "#1f77b4";
  bool line = false;  // false: scatter dots
};

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace bakerdim
