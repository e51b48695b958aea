#include "bakerdim/pair_count.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bakerdim {

namespace {

template <int DIM>
inline double dist2_fixed(const double* a, const double* b) {
  double s = 0.0;
  for (int d = 0; d < DIM; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

template <int DIM>
uint64_t brute_impl(const double* pts, std::size_t n, double eps2) {
  uint64_t total = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double* a = pts + i * DIM;
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist2_fixed<DIM>(a, pts + j * DIM) < eps2) ++total;
  }
  return total;
}

template <int DIM>
uint64_t cells_impl(const double* pts, std::size_t n, double eps) {
  const double eps2 = eps * eps;

  std::vector<std::array<int64_t, DIM>> idx(n);
  std::array<int64_t, DIM> lo{}, hi{};
  for (int d = 0; d < DIM; ++d) {
    lo[d] = INT64_MAX;
    hi[d] = INT64_MIN;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (int d = 0; d < DIM; ++d) {
      const int64_t c = static_cast<int64_t>(std::floor(pts[i * DIM + d] / eps));
      idx[i][d] = c;
      lo[d] = std::min(lo[d], c);
      hi[d] = std::max(hi[d], c);
    }

  std::array<int, DIM> shift{};
  int bits = 0;
  for (int d = 0; d < DIM; ++d) {
    shift[d] = bits;
    const uint64_t range = static_cast<uint64_t>(hi[d] - lo[d]) + 1;
    bits += std::bit_width(range + 1);
  }
  if (bits > 64) throw std::invalid_argument("pair_count_cells: grid too fine");

  auto pack = [&](const std::array<int64_t, DIM>& c) {
    uint64_t key = 0;
    for (int d = 0; d < DIM; ++d)
      key |= static_cast<uint64_t>(c[d] - lo[d]) << shift[d];
    return key;
  };

  std::vector<std::pair<uint64_t, uint32_t>> order(n);
  for (std::size_t i = 0; i < n; ++i)
    order[i] = {pack(idx[i]), static_cast<uint32_t>(i)};
  std::sort(order.begin(), order.end());

  std::vector<double> gathered(n * DIM);
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = pts + order[i].second * DIM;
    std::copy(src, src + DIM, gathered.data() + i * DIM);
  }

  struct Run {
    uint64_t key;
    uint32_t begin;
    uint32_t end;
    std::array<int64_t, DIM> cell;
  };
  std::vector<Run> runs;
  std::vector<uint64_t> run_keys;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && order[j].first == order[i].first) ++j;
    runs.push_back({order[i].first, static_cast<uint32_t>(i),
                    static_cast<uint32_t>(j), idx[order[i].second]});
    run_keys.push_back(order[i].first);
    i = j;
  }

  // Unordered cell pairs visited once: self plus the lexicographically
  // positive half of the 3^DIM - 1 unit offsets.
  std::vector<std::array<int64_t, DIM>> offsets;
  {
    std::array<int64_t, DIM> off{};
    const int total_offsets = [] {
      int t = 1;
      for (int d = 0; d < DIM; ++d) t *= 3;
      return t;
    }();
    for (int code = 0; code < total_offsets; ++code) {
      int c = code;
      for (int d = 0; d < DIM; ++d) {
        off[d] = c % 3 - 1;
        c /= 3;
      }
      for (int d = 0; d < DIM; ++d) {
        if (off[d] > 0) {
          offsets.push_back(off);
          break;
        }
        if (off[d] < 0) break;
      }
    }
  }

  uint64_t total = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 32) reduction(+ : total)
#endif
  for (long long r = 0; r < static_cast<long long>(runs.size()); ++r) {
    const Run& run = runs[static_cast<std::size_t>(r)];
    uint64_t local = 0;
    for (uint32_t i = run.begin; i < run.end; ++i) {
      const double* a = gathered.data() + static_cast<std::size_t>(i) * DIM;
      for (uint32_t j = i + 1; j < run.end; ++j)
        if (dist2_fixed<DIM>(a, gathered.data() + static_cast<std::size_t>(j) * DIM) <
            eps2)
          ++local;
    }
    for (const auto& off : offsets) {
      std::array<int64_t, DIM> nb = run.cell;
      bool in_range = true;
      for (int d = 0; d < DIM; ++d) {
        nb[d] += off[d];
        if (nb[d] < lo[d] || nb[d] > hi[d]) {
          in_range = false;
          break;
        }
      }
      if (!in_range) continue;
      const uint64_t nkey = pack(nb);
      const auto it = std::lower_bound(run_keys.begin(), run_keys.end(), nkey);
      if (it == run_keys.end() || *it != nkey) continue;
      const Run& other = runs[static_cast<std::size_t>(it - run_keys.begin())];
      for (uint32_t i = run.begin; i < run.end; ++i) {
        const double* a = gathered.data() + static_cast<std::size_t>(i) * DIM;
        for (uint32_t j = other.begin; j < other.end; ++j)
          if (dist2_fixed<DIM>(a, gathered.data() + static_cast<std::size_t>(j) * DIM) <
              eps2)
            ++local;
      }
    }
    total += local;
  }
  return total;
}

template <int DIM>
uint64_t brute_dispatch(const PointCloud& cloud, double eps) {
  return brute_impl<DIM>(cloud.coords.data(), cloud.count(), eps * eps);
}

}  // namespace

uint64_t pair_count_brute(const PointCloud& cloud, double eps) {
  switch (cloud.dim) {
    case 1: return brute_dispatch<1>(cloud, eps);
    case 2: return brute_dispatch<2>(cloud, eps);
    case 3: return brute_dispatch<3>(cloud, eps);
    case 4: return brute_dispatch<4>(cloud, eps);
    default: throw std::invalid_argument("pair_count: unsupported dimension");
  }
}

uint64_t pair_count_cells(const PointCloud& cloud, double eps) {
  switch (cloud.dim) {
    case 1: return cells_impl<1>(cloud.coords.data(), cloud.count(), eps);
    case 2: return cells_impl<2>(cloud.coords.data(), cloud.count(), eps);
    case 3: return cells_impl<3>(cloud.coords.data(), cloud.count(), eps);
    case 4: return cells_impl<4>(cloud.coords.data(), cloud.count(), eps);
    default: throw std::invalid_argument("pair_count: unsupported dimension");
  }
}

}  // namespace bakerdim
