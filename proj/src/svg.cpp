#include "wavetrans/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "wavetrans/csv.hpp"

namespace wavetrans {

namespace {

constexpr int kWidth = 720, kHeight = 480, kMargin = 48;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

double safe_log10(double v) { return std::log10(std::max(v, 1e-300)); }

}  // namespace

void svg_line_plot(const std::string& path, const std::string& title,
                   const std::vector<double>& x, const std::vector<SvgSeries>& series,
                   bool log_y) {
  std::ofstream out(path);
  require(out.good(), errc::config_invalid, "cannot open " + path);
  double x_lo = x.empty() ? 0 : x.front(), x_hi = x.empty() ? 1 : x.back();
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  for (const auto& s : series)
    for (double v : s.y) {
      const double y = log_y ? safe_log10(v) : v;
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (!(y_hi > y_lo)) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;

  auto px = [&](double v) {
    return kMargin + (v - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double v) {
    const double y = log_y ? safe_log10(v) : v;
    return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
  };

  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kWidth / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
      << "</text>\n";
  out << "<rect x='" << kMargin << "' y='" << kMargin << "' width='" << kWidth - 2 * kMargin
      << "' height='" << kHeight - 2 * kMargin << "' fill='none' stroke='#999'/>\n";
  int color = 0;
  for (const auto& s : series) {
    out << "<polyline fill='none' stroke='" << kPalette[color % 6] << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.y.size() && i < x.size(); ++i)
      out << format_double(px(x[i])) << "," << format_double(py(s.y[i])) << " ";
    out << "'/>\n";
    out << "<text x='" << kWidth - kMargin + 4 << "' y='" << kMargin + 16 * (color + 1)
        << "' font-size='11' fill='" << kPalette[color % 6] << "'>" << s.label << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
}

void svg_heatmap(const std::string& path, const std::string& title, const Mat& values) {
  std::ofstream out(path);
  require(out.good(), errc::config_invalid, "cannot open " + path);
  const int rows = static_cast<int>(values.rows());
  const int cols = static_cast<int>(values.cols());
  const double v_hi = values.cwiseAbs().maxCoeff();
  const double cell_w = double(kWidth - 2 * kMargin) / cols;
  const double cell_h = double(kHeight - 2 * kMargin) / rows;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kWidth / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
      << "</text>\n";
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int shade =
          static_cast<int>(std::round(255.0 * std::abs(values(i, j)) / (v_hi > 0 ? v_hi : 1)));
      out << "<rect x='" << format_double(kMargin + j * cell_w) << "' y='"
          << format_double(kMargin + i * cell_h) << "' width='" << format_double(cell_w + 0.5)
          << "' height='" << format_double(cell_h + 0.5) << "' fill='rgb(" << shade << ","
          << shade << "," << shade << ")'/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace wavetrans
