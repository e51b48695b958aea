#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bakerdim {

/// Flat point set, row-major, runtime dimension (1, 2 or 4).
struct PointCloud {
  int dim = 4;
  std::vector<double> coords;
  std::string provenance;
  uint64_t seed = 0;

  std::size_t count() const { return dim ? coords.size() / dim : 0; }

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, static_cast<std::size_t>(dim)};
  }

  void push(std::span<const double> p) {
    coords.insert(coords.end(), p.begin(), p.end());
  }
};

/// Caller guarantees a.size() == b.size(); strict evaluation order, no
/// contraction, so every call site sees identical bits.
inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

}  // namespace bakerdim
