#include "bakerdim/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bakerdim/measure.hpp"

namespace bakerdim {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 matmul(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (int j = 0; j < 4; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

bool hits_seam(const State4& s) { return s.x == 0.5 || s.z == 0.5; }

}  // namespace

ExponentSpectrum lyapunov_exact(const Params& p) {
  ExponentSpectrum s;
  s.values = {std::log(2.0), std::log(2.0), std::log(p.alpha), std::log(p.beta)};
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

bool history_converged(std::span<const std::array<double, 4>> history, double tol) {
  if (history.size() < 2) return true;
  const auto& a = history[history.size() - 2];
  const auto& b = history[history.size() - 1];
  for (int i = 0; i < 4; ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

ExponentSpectrum lyapunov_numerical(const Params& p, const CouplingFunction& g,
                                    State4 start, long long n_iters,
                                    int renorm_every) {
  ExponentSpectrum out;
  out.orbit_length = n_iters;

  constexpr int kMaxRestarts = 16;
  for (int attempt = 0;; ++attempt) {
    out.convergence_history.clear();

    State4 s0 = start;
    if (attempt > 0) {
      // Nudge off the seam; wrap to keep x,z in [0,1).
      const double eps = 1e-9 * static_cast<double>(attempt);
      s0.x = s0.x + eps < 1.0 ? s0.x + eps : s0.x - eps;
      s0.z = s0.z + eps < 1.0 ? s0.z + eps : s0.z - eps;
    }
    // Digit-stream orbit advance; the extension bits are a deterministic
    // function of the start, so results are reproducible.
    OrbitWalker walker(p, g, s0, 0x6C79617075ull + static_cast<uint64_t>(attempt));

    // Tangent frame in w,z,y,x order (columns of Q).
    Mat4 q{};
    q[3][0] = 1.0;
    q[2][1] = 1.0;
    q[1][2] = 1.0;
    q[0][3] = 1.0;
    std::array<double, 4> log_sums{};

    bool seam = false;
    long long done = 0;
    while (done < n_iters) {
      const int burst =
          static_cast<int>(std::min<long long>(renorm_every, n_iters - done));
      for (int it = 0; it < burst; ++it) {
        const State4 s = walker.state();
        if (hits_seam(s)) {
          seam = true;
          break;
        }
        q = matmul(jacobian(p, g, s).m, q);
        walker.advance();
      }
      if (seam) break;
      done += burst;

      // Modified Gram-Schmidt on the columns, accumulating log norms.
      for (int c = 0; c < 4; ++c) {
        for (int prev = 0; prev < c; ++prev) {
          double dot = 0.0;
          for (int r = 0; r < 4; ++r) dot += q[r][c] * q[r][prev];
          for (int r = 0; r < 4; ++r) q[r][c] -= dot * q[r][prev];
        }
        double norm2 = 0.0;
        for (int r = 0; r < 4; ++r) norm2 += q[r][c] * q[r][c];
        const double norm = std::sqrt(norm2);
        log_sums[c] += std::log(norm);
        for (int r = 0; r < 4; ++r) q[r][c] /= norm;
      }

      std::array<double, 4> running;
      for (int c = 0; c < 4; ++c)
        running[c] = log_sums[c] / static_cast<double>(done);
      std::sort(running.begin(), running.end(), std::greater<>());
      out.convergence_history.push_back(running);
    }

    if (!seam) {
      out.values.assign(log_sums.begin(), log_sums.end());
      for (double& v : out.values) v /= static_cast<double>(n_iters);
      std::sort(out.values.begin(), out.values.end(), std::greater<>());
      out.converged = history_converged(out.convergence_history);
      return out;
    }
    out.restarts++;
    if (attempt + 1 >= kMaxRestarts)
      throw std::runtime_error("lyapunov_numerical: orbit keeps hitting branch seams");
  }
}

DimensionValue kaplan_yorke(std::span<const double> descending) {
  const int d = static_cast<int>(descending.size());
  int j = 0;
  double partial = 0.0, partial_at_j = 0.0;
  for (int i = 0; i < d; ++i) {
    partial += descending[i];
    if (partial >= 0.0) {
      j = i + 1;
      partial_at_j = partial;
    }
  }
  DimensionValue dv;
  dv.j_index = j;
  if (j == 0)
    dv.value = 0.0;
  else if (j == d)
    dv.value = static_cast<double>(d);
  else
    dv.value = static_cast<double>(j) + partial_at_j / std::abs(descending[j]);
  return dv;
}

DimensionValue kaplan_yorke(const ExponentSpectrum& s) {
  return kaplan_yorke(std::span<const double>(s.values));
}

double dl_uncoupled_closed_form(const Params& p) {
  const double lo = std::min(p.alpha, p.beta);
  const double hi = std::max(p.alpha, p.beta);
  const double log2 = std::log(2.0);
  if (hi <= 0.25) return 2.0 - 2.0 * log2 / std::log(hi);
  return 3.0 - 2.0 * log2 / std::log(lo) - std::log(hi) / std::log(lo);
}

double d1_uncoupled_closed_form(const Params& p) {
  const double log2 = std::log(2.0);
  return 2.0 - log2 / std::log(p.alpha) - log2 / std::log(p.beta);
}

}  // namespace bakerdim
