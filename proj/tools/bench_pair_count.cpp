// Benchmark: brute-force pair counting vs the cell-list kernel, serial and
// threaded. Counts must agree exactly; timings show the kernel speedup.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bakerdim/dimension.hpp"
#include "bakerdim/dynamics.hpp"
#include "bakerdim/measure.hpp"
#include "bakerdim/pair_count.hpp"
#include "bakerdim/parallel.hpp"

using namespace bakerdim;

namespace {

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 50000;
  double eps = 1.0 / 64.0;
  if (argc > 1) n = static_cast<std::size_t>(std::atoll(argv[1]));
  if (argc > 2) eps = std::atof(argv[2]);

  const Params p(0.1, 0.4);
  const CouplingPtr g = make_trig_coupling({{1.0, 0.5, 1.5, 0.0, 0.0}});
  CloudOptions opt;
  opt.count = n;
  opt.seed = 20240901;

  PointCloud cloud;
  const double t_sample = timed([&] { cloud = sample_coupled_cloud(p, *g, opt); });
  std::printf("sampled %zu points in %.3fs (%d threads)\n", cloud.count(),
              t_sample, max_threads());

  uint64_t brute = 0, cells1 = 0, cellsN = 0;
  const double t_brute = timed([&] { brute = pair_count_brute(cloud, eps); });

  const int threads = max_threads();
  set_threads(1);
  const double t_cells1 = timed([&] { cells1 = pair_count_cells(cloud, eps); });
  set_threads(threads);
  const double t_cellsN = timed([&] { cellsN = pair_count_cells(cloud, eps); });

  std::printf("eps = %g\n", eps);
  std::printf("  brute (serial reference): %llu pairs in %.3fs\n",
              static_cast<unsigned long long>(brute), t_brute);
  std::printf("  cells, 1 thread:          %llu pairs in %.3fs (%.1fx)\n",
              static_cast<unsigned long long>(cells1), t_cells1,
              t_brute / t_cells1);
  std::printf("  cells, %d threads:         %llu pairs in %.3fs (%.1fx)\n",
              threads, static_cast<unsigned long long>(cellsN), t_cellsN,
              t_brute / t_cellsN);

  if (brute != cells1 || brute != cellsN) {
    std::printf("COUNT MISMATCH\n");
    return 1;
  }
  std::printf("counts agree exactly\n");
  return 0;
}
