#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bakerdim {

/// Fixed-size work chunks, independent of the number of threads. Reductions
/// over per-chunk partials combined in chunk order stay bit-stable no matter
/// how the chunks were scheduled.
inline constexpr std::size_t kChunk = 4096;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

/// f(begin, end) over [0,n) split into kChunk-sized pieces, in parallel.
/// f must only touch state owned by its own index range.
template <class F>
void parallel_chunks(std::size_t n, F&& f) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = b + kChunk < n ? b + kChunk : n;
    f(b, e);
  }
}

/// Deterministic parallel sum: per-chunk serial partials, combined in chunk
/// order on one thread.
template <class F>
double chunked_sum(std::size_t n, F&& value) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = b + kChunk < n ? b + kChunk : n;
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += value(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace bakerdim
