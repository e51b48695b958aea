#include "bakerdim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bakerdim {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 620.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 50.0;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const PlotSeries& s : series)
    for (const auto& [x, y] : s.points) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (!(xlo <= xhi)) {
    xlo = 0.0;
    xhi = 1.0;
    ylo = 0.0;
    yhi = 1.0;
  }
  if (xhi == xlo) xhi = xlo + 1.0;
  if (yhi == ylo) yhi = ylo + 1.0;
  const double xpad = 0.03 * (xhi - xlo), ypad = 0.03 * (yhi - ylo);
  xlo -= xpad;
  xhi += xpad;
  ylo -= ypad;
  yhi += ypad;

  const double pw = kWidth - kMarginL - kMarginR;
  const double ph = kHeight - kMarginT - kMarginB;
  auto sx = [&](double x) { return kMarginL + (x - xlo) / (xhi - xlo) * pw; };
  auto sy = [&](double y) { return kMarginT + (yhi - y) / (yhi - ylo) * ph; };

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Frame and axis ticks.
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xlo + (xhi - xlo) * i / 4.0;
    const double fy = ylo + (yhi - ylo) * i / 4.0;
    out << "<text x=\"" << sx(fx) << "\" y=\"" << kHeight - kMarginB + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(fx) << "</text>\n";
    out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(fy) << "</text>\n";
    out << "<line x1=\"" << sx(fx) << "\" y1=\"" << kMarginT + ph << "\" x2=\""
        << sx(fx) << "\" y2=\"" << kMarginT + ph + 4 << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginL - 4 << "\" y1=\"" << sy(fy) << "\" x2=\""
        << kMarginL << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
  }
  out << "<text x=\"" << kMarginL + pw / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginT + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << kMarginT + ph / 2 << ")\">" << y_label
      << "</text>\n";

  double legend_y = kMarginT + 16.0;
  for (const PlotSeries& s : series) {
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points) out << num(sx(x)) << "," << num(sy(y)) << " ";
      out << "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points)
        out << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y))
            << "\" r=\"1.2\" fill=\"" << s.color << "\" fill-opacity=\"0.6\"/>\n";
    }
    if (!s.label.empty()) {
      out << "<rect x=\"" << kMarginL + pw - 150 << "\" y=\"" << legend_y - 9
          << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
      out << "<text x=\"" << kMarginL + pw - 136 << "\" y=\"" << legend_y
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
          << "</text>\n";
      legend_y += 16.0;
    }
  }
  out << "</svg>\n";
}

}  // namespace bakerdim
