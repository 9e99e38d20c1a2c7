#pragma once

#include <string>
#include <vector>

#include "wavetrans/types.hpp"

namespace wavetrans {

/// Minimal line/heatmap SVG emitters. CSV files are the source of truth;
/// these are best-effort companions for eyeballing results.
struct SvgSeries {
  std::string label;
  std::vector<double> y;
};

void svg_line_plot(const std::string& path, const std::string& title,
                   const std::vector<double>& x, const std::vector<SvgSeries>& series,
                   bool log_y = false);

void svg_heatmap(const std::string& path, const std::string& title, const Mat& values);

}  // namespace wavetrans
