#include "bakerdim/linfit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bakerdim {

namespace {

LineFit around_line(std::span<const double> x, std::span<const double> y,
                    double slope, double intercept) {
  LineFit f;
  f.slope = slope;
  f.intercept = intercept;
  f.n = static_cast<int>(x.size());
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(y.size());
  double rss = 0.0, tss = 0.0, sxx = 0.0, xbar = 0.0;
  for (double v : x) xbar += v;
  xbar /= static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    rss += r * r;
    tss += (y[i] - ybar) * (y[i] - ybar);
    sxx += (x[i] - xbar) * (x[i] - xbar);
  }
  f.r_squared = tss > 0.0 ? std::max(0.0, 1.0 - rss / tss) : 1.0;
  if (f.n > 2 && sxx > 0.0)
    f.slope_stderr = std::sqrt(rss / static_cast<double>(f.n - 2) / sxx);
  return f;
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (n == 1) return {0.0, y[0], 0.0, 1.0, 1};
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return around_line(x, y, slope, ybar - slope * xbar);
}

LineFit fit_line_theil_sen(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) return fit_line(x, y);
  std::vector<double> slopes;
  slopes.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
  if (slopes.empty()) return fit_line(x, y);
  std::nth_element(slopes.begin(), slopes.begin() + slopes.size() / 2, slopes.end());
  const double slope = slopes[slopes.size() / 2];
  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - slope * x[i];
  std::nth_element(resid.begin(), resid.begin() + n / 2, resid.end());
  return around_line(x, y, slope, resid[n / 2]);
}

}  // namespace bakerdim
