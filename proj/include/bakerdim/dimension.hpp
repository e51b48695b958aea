#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bakerdim/cloud.hpp"

namespace bakerdim {

/// Occupied-cell count and per-cell masses on the grid of eps-sided cells
/// anchored at the origin. Rejects eps below 1e-12 of the data diameter.
struct BoxStats {
  uint64_t occupied = 0;
  std::vector<double> masses;
};

BoxStats box_count(const PointCloud& cloud, double eps);

struct ScaleStat {
  double epsilon = 0.0;
  double statistic = 0.0;
  double count = 0.0;
};

enum class FitTransform { BoxCount, Information, Correlation, PointwiseMass };
enum class FitMethod { LeastSquares, TheilSen };

struct DimensionEstimate {
  double value = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 1.0;
  std::vector<ScaleStat> per_scale;    // scales that entered the fit
  std::vector<double> dropped_scales;  // epsilons dropped (empty / non-finite)
  bool degenerate = false;             // fewer than 2 usable scales
};

/// Least-squares slope of the transformed statistic against log eps,
/// oriented so value is the dimension. Needs >= 4 scales in the window;
/// scales whose statistic is empty or non-finite are dropped and reported.
DimensionEstimate fit_dimension(std::span<const ScaleStat> stats, FitTransform t,
                                FitMethod method = FitMethod::LeastSquares);

/// eps = 2^-k for k = k_min..k_max.
std::vector<double> dyadic_scales(int k_min, int k_max);

DimensionEstimate box_dimension(const PointCloud& cloud,
                                std::span<const double> scales);

/// Slope of sum_i p_i log p_i against log eps on origin-anchored grids.
DimensionEstimate information_dimension_grid(const PointCloud& cloud,
                                             std::span<const double> scales);

struct CorrelationOptions {
  uint64_t seed = 0;
  /// Per-scale point cap = subsample_base / eps (seeded draw, independent of
  /// thread count); 0 disables subsampling. Caps the pair work at the large
  /// scales where the correlation sum is already statistically easy.
  std::size_t subsample_base = 20000;
  bool use_cells = true;
};

/// Slope of log C(eps) against log eps, C the fraction of point pairs closer
/// than eps (cell-list counting).
DimensionEstimate correlation_dimension(const PointCloud& cloud,
                                        std::span<const double> scales,
                                        const CorrelationOptions& opts = {});

/// Monte-Carlo running means of |x-y|^-s at geometric sample sizes.
/// divergent = the mean still grew by >20% per decade over the last two
/// decades (diagnostic only; no finite-sample test can certify the limit).
struct PotentialEstimate {
  double s = 0.0;
  std::vector<std::pair<std::size_t, double>> partial_means;
  bool divergent = false;
};

PotentialEstimate s_potential(const PointCloud& cloud, std::span<const double> x,
                              double s);

/// Slope of log empirical mass of B(x,eps) against log eps.
DimensionEstimate pointwise_dimension(const PointCloud& cloud,
                                      std::span<const double> x,
                                      std::span<const double> scales);

/// Mean per-center pointwise slope over centers drawn from the cloud; the
/// averaged value estimates the information dimension.
struct AveragedPointwise {
  DimensionEstimate estimate;  // value = mean slope, slope_stderr = se of mean
  std::vector<double> center_slopes;
};

AveragedPointwise averaged_pointwise_dimension(const PointCloud& cloud,
                                               std::span<const double> scales,
                                               int n_centers, uint64_t seed);

/// Seeded draw of n distinct points (partial Fisher-Yates), order-stable
/// across thread counts.
PointCloud subcloud(const PointCloud& cloud, std::size_t n, uint64_t seed);

}  // namespace bakerdim
