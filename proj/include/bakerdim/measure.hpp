#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bakerdim/cloud.hpp"
#include "bakerdim/dynamics.hpp"
#include "bakerdim/rng.hpp"

namespace bakerdim {

// ---------------------------------------------------------------------------
// Cantor sampling. A depth-N digit word (b_0..b_{N-1}) of fair bits realizes
// the balanced Cantor measure through value = (1-a) * sum_i a^i b_i, up to
// an a^N discretization tail.
// ---------------------------------------------------------------------------

struct CantorPoint {
  std::vector<uint8_t> digits;
  double value = 0.0;
};

/// Backward Horner over the digit word; digits[0] is the leading digit.
double cantor_value(double contraction, std::span<const uint8_t> digits);

CantorPoint sample_cantor(double contraction, SplitMix64& rng, int depth);

/// Digits needed to resolve a Cantor value to ~1e-17.
int cantor_resolution_digits(double contraction);

// ---------------------------------------------------------------------------
// Past histories.
// ---------------------------------------------------------------------------

/// Backward orbit (x_{-1},y_{-1}),...,(x_{-n},y_{-n}) reconstructed with
/// baker_inverse. If round-off pushes y off the invertibility slab the
/// history stops there: escape_index is the 1-based step that failed and
/// states holds the part built so far.
struct PastHistory {
  std::vector<State2> states;
  int escape_index = -1;

  bool complete() const { return escape_index < 0; }
};

PastHistory past_history(const Params& p, State2 s, int n);

// ---------------------------------------------------------------------------
// Measure samples carry the digit words behind y and w so the conjugacy can
// walk the past without ever leaving the slab.
// ---------------------------------------------------------------------------

struct MeasureSample {
  State4 v;
  std::vector<uint8_t> y_digits;
  std::vector<uint8_t> w_digits;
};

/// x,z uniform on [0,1); y ~ nu_alpha and w ~ nu_beta by digit words of the
/// given depth; all four independent.
MeasureSample sample_uncoupled_measure(const Params& p, SplitMix64& rng, int depth);

inline MeasureSample sample_uncoupled_measure_indexed(const Params& p, uint64_t seed,
                                                      uint64_t index, int depth) {
  SplitMix64 rng = stream_rng(seed, kStreamSample, index);
  return sample_uncoupled_measure(p, rng, depth);
}

// ---------------------------------------------------------------------------
// Conjugacy between the uncoupled and coupled attractors: shifts w by the
// series sum_{i<N} beta^i g(B_alpha^{-i-1}(x,y)); geometric tail bound
// |g| beta^N / (1-beta).
// ---------------------------------------------------------------------------

struct ConjugacyResult {
  State4 image;
  int truncation_depth = 0;
  double tail_bound = 0.0;
};

/// Depth that pushes the tail bound below tol, clamped to [1, 2000].
int default_truncation_depth(const Params& p, const CouplingFunction& g,
                             double tol = 1e-12);

/// The series evaluated from a digit word: the inverse-branch choice at step
/// i is exactly digit i, so the past never escapes the slab.
double conjugacy_series(const Params& p, const CouplingFunction& g, double x,
                        std::span<const uint8_t> y_digits, int depth);

/// sign=+1 maps the uncoupled sample onto the coupled attractor, sign=-1 is
/// the inverse shift. Requires depth+1 <= y_digits.size() would be ideal;
/// the series truncates at min(depth, digits available - 1).
ConjugacyResult conjugacy_map(const Params& p, const CouplingFunction& g,
                              const MeasureSample& s, int depth, int sign = +1);

/// Pushforward sampler for the coupled physical measure.
MeasureSample sample_coupled_measure(const Params& p, const CouplingFunction& g,
                                     SplitMix64& rng, int depth);

// ---------------------------------------------------------------------------
// Cloud builders (parallel over sample indices, counter-keyed RNG; output is
// identical for every thread count).
// ---------------------------------------------------------------------------

struct CloudOptions {
  std::size_t count = 100000;
  uint64_t seed = 1;
  int depth = 0;  // 0 = derive from params/coupling/tolerance
  double tol = 1e-12;
};

PointCloud sample_coupled_cloud(const Params& p, const CouplingFunction& g,
                                const CloudOptions& opt);
PointCloud sample_uncoupled_cloud(const Params& p, const CloudOptions& opt);

/// Forward orbit that advances the doubling coordinates through their
/// binary digit streams. Plain float doubling annihilates every double in
/// at most ~53 steps (every float is a dyadic rational, i.e. lies in the
/// map's discontinuity prehistory), so long orbits are walked by keeping a
/// 64-bit window of upcoming branch bits per expanding coordinate and
/// appending fresh fair bits as the window shifts; the contracting
/// coordinates evolve in ordinary arithmetic. The branch bit always equals
/// the leading bit of the reconstructed coordinate, so single steps agree
/// with coupled_step up to the one fresh bit entering at 2^-53.
class OrbitWalker {
 public:
  /// Typical orbit from a random point of the absorbing box.
  OrbitWalker(const Params& p, const CouplingFunction& g, SplitMix64 rng);

  /// Orbit through the given state; the digits beyond the start's 53-bit
  /// mantissa are extended pseudo-randomly from bit_seed.
  OrbitWalker(const Params& p, const CouplingFunction& g, const State4& start,
              uint64_t bit_seed);

  State4 state() const;
  void advance();

 private:
  bool next_bit();

  double alpha_;
  double beta_;
  const CouplingFunction* g_;
  uint64_t wx_ = 0;
  uint64_t wz_ = 0;
  double y_ = 0.0;
  double w_ = 0.0;
  SplitMix64 bits_;
  uint64_t reservoir_ = 0;
  int reservoir_bits_ = 0;
};

/// Cross-validation sampler: walks seeded orbits from random starts inside
/// the absorbing box, one 65536-sample segment per orbit, dropping a
/// transient per orbit.
PointCloud orbit_cloud(const Params& p, const CouplingFunction& g,
                       std::size_t count, uint64_t seed, int transient = 100);

/// 1-d cloud of Cantor samples (estimator oracle fodder).
PointCloud cantor_cloud(double contraction, std::size_t count, uint64_t seed);

// ---------------------------------------------------------------------------
// Continuity modulus of the conjugacy w-component. Pairs share x and the
// first k y-digits; digit k is flipped and the remainder redrawn, which pins
// |dy| into [(1-2a)a^k, a^k]. Per scale the table records the worst ratio
// |dh| / |dy|^rho_test; the slope of log max|dh| against log|dy| follows.
// ---------------------------------------------------------------------------

struct ModulusScale {
  int k = 0;
  std::size_t pairs = 0;
  double max_ratio = 0.0;   // max |dh| / |dy|^rho_test
  double dy_at_max = 0.0;   // |dy| of the pair with the largest |dh|
  double dh_at_max = 0.0;   // that largest |dh|
};

struct ModulusResult {
  std::vector<ModulusScale> scales;
  double rho_test = 1.0;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  bool degenerate = false;  // all differences vanished (e.g. g = 0)
};

ModulusResult empirical_modulus(const Params& p, const CouplingFunction& g,
                                int pairs_per_scale, int k_min, int n_scales,
                                double rho_test, uint64_t seed);

/// Scale count so that |dy| spans the requested number of decades.
int modulus_scales_for_decades(double alpha, double decades);

}  // namespace bakerdim
