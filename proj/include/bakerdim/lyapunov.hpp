#pragma once

#include <array>
#include <span>
#include <vector>

#include "bakerdim/dynamics.hpp"

namespace bakerdim {

struct ExponentSpectrum {
  std::vector<double> values;  // nats per iteration, sorted descending
  long long orbit_length = 0;
  // Running sorted estimates recorded at each renormalization.
  std::vector<std::array<double, 4>> convergence_history;
  int restarts = 0;
  bool converged = true;
};

/// Closed-form spectrum {log 2, log 2, log alpha, log beta}, sorted.
ExponentSpectrum lyapunov_exact(const Params& p);

/// Orthogonalized cocycle products (modified Gram-Schmidt every
/// renorm_every steps). The tangent frame starts in w,z,y,x order, which
/// keeps the triangular cocycle's constant diagonal on the Gram-Schmidt
/// pivots, so the estimates carry arithmetic error only. Orbits that hit a
/// branch seam (x or z exactly 1/2) restart from a perturbed initial
/// condition, counted in restarts.
ExponentSpectrum lyapunov_numerical(const Params& p, const CouplingFunction& g,
                                    State4 start, long long n_iters,
                                    int renorm_every = 8);

/// True when the last two running estimates agree within tol componentwise.
bool history_converged(std::span<const std::array<double, 4>> history,
                       double tol = 1e-4);

struct DimensionValue {
  double value = 0.0;
  int j_index = 0;
};

/// Kaplan-Yorke dimension of a descending spectrum: j is the largest index
/// with nonnegative partial sum (a sum of exactly zero counts), value is
/// 0 / j + S_j/|chi_{j+1}| / d for j = 0 / 0<j<d / d.
DimensionValue kaplan_yorke(std::span<const double> descending);
DimensionValue kaplan_yorke(const ExponentSpectrum& s);

/// Uncoupled-system Lyapunov dimension: with (lo,hi) = sorted rates,
/// 2 - 2log2/log(hi) for hi <= 1/4, else 3 - 2log2/log(lo) - log(hi)/log(lo).
double dl_uncoupled_closed_form(const Params& p);

/// Information dimension of the product measure:
/// 2 - log2/log(alpha) - log2/log(beta).
double d1_uncoupled_closed_form(const Params& p);

}  // namespace bakerdim
