#include "bakerdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bakerdim/linfit.hpp"
#include "bakerdim/pair_count.hpp"
#include "bakerdim/parallel.hpp"
#include "bakerdim/rng.hpp"

namespace bakerdim {

namespace {

double data_diameter(const PointCloud& cloud) {
  double diam = 0.0;
  for (int d = 0; d < cloud.dim; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < cloud.count(); ++i) {
      const double v = cloud.coords[i * cloud.dim + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    diam = std::max(diam, hi - lo);
  }
  return diam;
}

}  // namespace

BoxStats box_count(const PointCloud& cloud, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("box_count: eps must be positive");
  const std::size_t n = cloud.count();
  if (n == 0) return {};
  const double diam = data_diameter(cloud);
  if (diam > 0.0 && eps < 1e-12 * diam)
    throw std::invalid_argument("box_count: eps degenerate for data diameter");

  std::vector<std::array<int64_t, 4>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::array<int64_t, 4> k{0, 0, 0, 0};
    for (int d = 0; d < cloud.dim; ++d)
      k[static_cast<std::size_t>(d)] =
          static_cast<int64_t>(std::floor(cloud.coords[i * cloud.dim + d] / eps));
    keys[i] = k;
  }
  std::sort(keys.begin(), keys.end());

  BoxStats out;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && keys[j] == keys[i]) ++j;
    out.masses.push_back(static_cast<double>(j - i) * inv_n);
    i = j;
  }
  out.occupied = out.masses.size();
  return out;
}

std::vector<double> dyadic_scales(int k_min, int k_max) {
  std::vector<double> s;
  for (int k = k_min; k <= k_max; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

DimensionEstimate fit_dimension(std::span<const ScaleStat> stats, FitTransform t,
                                FitMethod method) {
  if (stats.size() < 4)
    throw std::invalid_argument("fit_dimension: need at least 4 scales in window");

  DimensionEstimate est;
  std::vector<double> lx, ly;
  for (const ScaleStat& s : stats) {
    double y;
    switch (t) {
      case FitTransform::BoxCount:
      case FitTransform::Correlation:
      case FitTransform::PointwiseMass:
        y = s.statistic > 0.0 ? std::log(s.statistic)
                              : std::numeric_limits<double>::quiet_NaN();
        break;
      case FitTransform::Information:
      default:
        y = s.statistic;
        break;
    }
    if (!std::isfinite(y)) {
      est.dropped_scales.push_back(s.epsilon);
      continue;
    }
    est.per_scale.push_back(s);
    lx.push_back(std::log(s.epsilon));
    ly.push_back(y);
  }

  if (lx.size() < 2) {
    est.degenerate = true;
    est.value = std::numeric_limits<double>::quiet_NaN();
    return est;
  }

  const LineFit fit = method == FitMethod::TheilSen ? fit_line_theil_sen(lx, ly)
                                                    : fit_line(lx, ly);
  est.value = t == FitTransform::BoxCount ? -fit.slope : fit.slope;
  est.slope_stderr = fit.slope_stderr;
  est.r_squared = fit.r_squared;
  auto [mn, mx] = std::minmax_element(est.per_scale.begin(), est.per_scale.end(),
                                      [](const ScaleStat& a, const ScaleStat& b) {
                                        return a.epsilon < b.epsilon;
                                      });
  est.eps_min = mn->epsilon;
  est.eps_max = mx->epsilon;
  return est;
}

DimensionEstimate box_dimension(const PointCloud& cloud,
                                std::span<const double> scales) {
  std::vector<ScaleStat> stats;
  for (double eps : scales) {
    const BoxStats b = box_count(cloud, eps);
    stats.push_back({eps, static_cast<double>(b.occupied),
                     static_cast<double>(b.occupied)});
  }
  return fit_dimension(stats, FitTransform::BoxCount);
}

DimensionEstimate information_dimension_grid(const PointCloud& cloud,
                                             std::span<const double> scales) {
  std::vector<ScaleStat> stats;
  for (double eps : scales) {
    const BoxStats b = box_count(cloud, eps);
    double h = 0.0;
    for (double p : b.masses) h += p * std::log(p);
    stats.push_back({eps, h, static_cast<double>(b.occupied)});
  }
  return fit_dimension(stats, FitTransform::Information);
}

PointCloud subcloud(const PointCloud& cloud, std::size_t n, uint64_t seed) {
  const std::size_t total = cloud.count();
  n = std::min(n, total);
  std::vector<uint32_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0u);
  SplitMix64 rng = stream_rng(seed, kStreamSubsample, total);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next() % (total - i));
    std::swap(idx[i], idx[j]);
  }
  PointCloud out;
  out.dim = cloud.dim;
  out.seed = seed;
  out.provenance = cloud.provenance + "/sub";
  out.coords.resize(n * cloud.dim);
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(cloud.coords.data() + idx[i] * cloud.dim, cloud.dim,
                out.coords.data() + i * cloud.dim);
  return out;
}

DimensionEstimate correlation_dimension(const PointCloud& cloud,
                                        std::span<const double> scales,
                                        const CorrelationOptions& opts) {
  if (cloud.count() < 1000)
    throw std::invalid_argument("correlation_dimension: need at least 1e3 points");

  std::vector<ScaleStat> stats;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const double eps = scales[si];
    std::size_t n_k = cloud.count();
    if (opts.subsample_base > 0) {
      const double cap = static_cast<double>(opts.subsample_base) / eps;
      if (cap < static_cast<double>(n_k)) n_k = static_cast<std::size_t>(cap);
    }
    const PointCloud* use = &cloud;
    PointCloud sub;
    if (n_k < cloud.count()) {
      sub = subcloud(cloud, n_k, opts.seed ^ (0x9E37u + si));
      use = &sub;
    }
    const uint64_t cnt =
        opts.use_cells ? pair_count_cells(*use, eps) : pair_count_brute(*use, eps);
    const double pairs =
        0.5 * static_cast<double>(n_k) * static_cast<double>(n_k - 1);
    stats.push_back({eps, static_cast<double>(cnt) / pairs,
                     static_cast<double>(cnt)});
  }
  return fit_dimension(stats, FitTransform::Correlation);
}

PotentialEstimate s_potential(const PointCloud& cloud, std::span<const double> x,
                              double s) {
  if (s < 0.0) throw std::invalid_argument("s_potential: s must be >= 0");
  PotentialEstimate out;
  out.s = s;
  const std::size_t n = cloud.count();

  std::vector<std::size_t> sizes;
  for (std::size_t m = 1000; m < n; m *= 10) sizes.push_back(m);
  sizes.push_back(n);

  double sum = 0.0;
  std::size_t used = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = dist2(cloud.point(i), x);
    if (d2 > 0.0) {
      sum += std::pow(d2, -0.5 * s);
      ++used;
    }
    if (next < sizes.size() && i + 1 == sizes[next]) {
      out.partial_means.emplace_back(sizes[next],
                                     used ? sum / static_cast<double>(used) : 0.0);
      ++next;
    }
  }

  const auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 1.0; };
  const auto& pm = out.partial_means;
  if (pm.size() >= 3) {
    const double r1 = ratio(pm[pm.size() - 2].second, pm[pm.size() - 3].second);
    const double r2 = ratio(pm[pm.size() - 1].second, pm[pm.size() - 2].second);
    out.divergent = r1 > 1.2 && r2 > 1.2;
  } else if (pm.size() == 2) {
    out.divergent = ratio(pm[1].second, pm[0].second) > 1.2;
  }
  return out;
}

namespace {

// Ball masses around one center for every scale in one pass over the cloud.
// Scales must be sorted descending. exclude = index of the center itself
// when it belongs to the cloud (SIZE_MAX otherwise).
void ball_counts(const PointCloud& cloud, std::span<const double> center,
                 std::span<const double> scales_desc, std::size_t exclude,
                 std::vector<uint64_t>& counts) {
  counts.assign(scales_desc.size(), 0);
  std::vector<double> eps2(scales_desc.size());
  for (std::size_t k = 0; k < scales_desc.size(); ++k)
    eps2[k] = scales_desc[k] * scales_desc[k];
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    if (i == exclude) continue;
    const double d2 = dist2(cloud.point(i), center);
    for (std::size_t k = 0; k < scales_desc.size(); ++k) {
      if (d2 < eps2[k])
        counts[k]++;
      else
        break;  // scales descend; once outside, outside for the rest
    }
  }
}

DimensionEstimate pointwise_from_counts(std::span<const double> scales_desc,
                                        std::span<const uint64_t> counts,
                                        double denom) {
  std::vector<ScaleStat> stats;
  for (std::size_t k = 0; k < scales_desc.size(); ++k)
    stats.push_back({scales_desc[k],
                     static_cast<double>(counts[k]) / denom,
                     static_cast<double>(counts[k])});
  return fit_dimension(stats, FitTransform::PointwiseMass);
}

}  // namespace

DimensionEstimate pointwise_dimension(const PointCloud& cloud,
                                      std::span<const double> x,
                                      std::span<const double> scales) {
  if (cloud.count() < 2)
    throw std::invalid_argument("pointwise_dimension: need at least 2 points");
  std::vector<double> desc(scales.begin(), scales.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());
  std::vector<uint64_t> counts;
  ball_counts(cloud, x, desc, static_cast<std::size_t>(-1), counts);
  return pointwise_from_counts(desc, counts, static_cast<double>(cloud.count()));
}

AveragedPointwise averaged_pointwise_dimension(const PointCloud& cloud,
                                               std::span<const double> scales,
                                               int n_centers, uint64_t seed) {
  std::vector<double> desc(scales.begin(), scales.end());
  std::sort(desc.begin(), desc.end(), std::greater<>());

  // Seeded draw of center indices.
  const std::size_t total = cloud.count();
  std::vector<uint32_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0u);
  SplitMix64 rng = stream_rng(seed, kStreamCenters, total);
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(n_centers), total);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next() % (total - i));
    std::swap(idx[i], idx[j]);
  }

  std::vector<double> slopes(m, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::vector<double>> log_masses(m);
  const double denom = static_cast<double>(total - 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long c = 0; c < static_cast<long long>(m); ++c) {
    std::vector<uint64_t> counts;
    const std::size_t center = idx[static_cast<std::size_t>(c)];
    ball_counts(cloud, cloud.point(center), desc, center, counts);
    const DimensionEstimate est = pointwise_from_counts(desc, counts, denom);
    if (!est.degenerate) slopes[static_cast<std::size_t>(c)] = est.value;
    std::vector<double>& lm = log_masses[static_cast<std::size_t>(c)];
    lm.resize(desc.size());
    for (std::size_t k = 0; k < desc.size(); ++k)
      lm[k] = counts[k] > 0 ? std::log(static_cast<double>(counts[k]) / denom)
                            : std::numeric_limits<double>::quiet_NaN();
  }

  AveragedPointwise out;
  double sum = 0.0, sum2 = 0.0;
  std::size_t used = 0;
  for (double v : slopes)
    if (std::isfinite(v)) {
      out.center_slopes.push_back(v);
      sum += v;
      sum2 += v * v;
      ++used;
    }
  DimensionEstimate& est = out.estimate;
  if (used < 2) {
    est.degenerate = true;
    est.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  est.value = sum / static_cast<double>(used);
  const double var =
      (sum2 - sum * sum / static_cast<double>(used)) / static_cast<double>(used - 1);
  est.slope_stderr = std::sqrt(std::max(0.0, var) / static_cast<double>(used));
  est.eps_min = desc.back();
  est.eps_max = desc.front();
  // Mean log-mass per scale, for the per-scale record.
  for (std::size_t k = 0; k < desc.size(); ++k) {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (const auto& lm : log_masses)
      if (std::isfinite(lm[k])) {
        acc += lm[k];
        ++cnt;
      }
    if (cnt > 0)
      est.per_scale.push_back(
          {desc[k], std::exp(acc / static_cast<double>(cnt)), static_cast<double>(cnt)});
    else
      est.dropped_scales.push_back(desc[k]);
  }
  return out;
}

}  // namespace bakerdim
