#pragma once

#include <span>

namespace bakerdim {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 1.0;
  int n = 0;
};

/// Ordinary least squares y on x. With fewer than 3 points the stderr is 0.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Theil-Sen: median of pairwise slopes, intercept = median residual,
/// stderr/r2 computed around that line.
LineFit fit_line_theil_sen(std::span<const double> x, std::span<const double> y);

}  // namespace bakerdim
