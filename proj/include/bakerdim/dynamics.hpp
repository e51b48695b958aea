#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bakerdim {

/// Contraction rates of the drive and response maps. Both must lie in
/// (0, 1/2); anything else is rejected at construction.
struct Params {
  double alpha;
  double beta;

  Params(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0 && alpha < 0.5) || !(beta > 0.0 && beta < 0.5))
      throw std::invalid_argument("contraction rates must lie in (0, 1/2)");
  }
};

struct State2 {
  double x = 0.0;
  double y = 0.0;
};

struct State4 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double w = 0.0;
};

struct Grad2 {
  double gx = 0.0;
  double gy = 0.0;
};

/// Bounded C^1 scalar field on [0,1) x R. sup_norm() and lip_const() are
/// conservative upper bounds (triangle inequality), not suprema; every
/// consumer uses them one-sided. Instances are immutable after construction
/// and safe to share across threads.
class CouplingFunction {
 public:
  virtual ~CouplingFunction() = default;

  virtual double eval(double x, double y) const = 0;
  virtual Grad2 grad(double x, double y) const = 0;
  virtual double sup_norm() const = 0;
  virtual double lip_const() const = 0;
  virtual std::string describe() const = 0;
  virtual bool is_zero() const { return false; }

  double operator()(double x, double y) const { return eval(x, y); }
};

using CouplingPtr = std::shared_ptr<const CouplingFunction>;

/// One term c * cos(fx*pi*x + phase_x) * sin(fy*pi*y + phase_y).
struct TrigTerm {
  double amplitude = 0.0;
  double freq_x = 0.0;
  double freq_y = 0.0;
  double phase_x = 0.0;
  double phase_y = 0.0;
};

CouplingPtr make_zero_coupling();
CouplingPtr make_trig_coupling(std::vector<TrigTerm> terms);

/// p(x,y) = y on the strip y in [0,1], blended C^1 to constants outside
/// y in [-1,2] so the field stays bounded. The attractor never sees the
/// blend region.
CouplingPtr make_probe_coupling();

/// g(x,y) = gtilde(B_alpha(x,y)) - beta * gtilde(x,y). The conjugacy series
/// of such a coupling telescopes to gtilde, so it leaves every dimension of
/// the physical measure unchanged.
CouplingPtr make_cohomologous_coupling(const Params& p, CouplingPtr gtilde);

/// gtilde(x,y) = sin^2(2 pi x) * tanh(y).
CouplingPtr make_sine_squared_tanh();

CouplingPtr make_constant_coupling(double c);
CouplingPtr scale_coupling(double lambda, CouplingPtr g);
CouplingPtr add_coupling(CouplingPtr a, CouplingPtr b);

/// One step of the 2-d skinny baker's map with the given contraction rate.
/// Branch decided by x < 1/2 (half-open convention; x = 1/2 exactly takes
/// the right branch). The doubled coordinate is computed as 2x or 2x-1 by
/// branch, never by a generic modulo.
State2 baker_step_rate(double rate, State2 s);

inline State2 baker_step(const Params& p, State2 s) {
  return baker_step_rate(p.alpha, s);
}

/// Inverse branch decided by y <= 1/2. Only defined on the attractor slab
/// y in [0,alpha] u [1-alpha,1]; throws std::domain_error outside it.
State2 baker_inverse_rate(double rate, State2 s);

inline State2 baker_inverse(const Params& p, State2 s) {
  return baker_inverse_rate(p.alpha, s);
}

inline bool on_inverse_slab(double rate, double y) {
  return (y >= 0.0 && y <= rate) || (y >= 1.0 - rate && y <= 1.0);
}

/// One step of the coupled system. Both branch tests and both coupling
/// terms use the input state.
State4 coupled_step(const Params& p, const CouplingFunction& f,
                    const CouplingFunction& g, State4 s);

/// Uni-directional special case f = 0.
State4 coupled_step(const Params& p, const CouplingFunction& g, State4 s);

/// Derivative of the coupled step (f = 0): lower triangular, diagonal
/// (2, alpha, 2, beta), row 4 = (g_x, g_y, 0, beta). The matrix pattern is
/// the same on every branch piece; at_branch_boundary flags states sitting
/// exactly on x or z in {0, 1/2} where the map itself is discontinuous.
struct Jacobian4 {
  std::array<std::array<double, 4>, 4> m{};
  bool at_branch_boundary = false;
};

Jacobian4 jacobian(const Params& p, const CouplingFunction& g, const State4& s);

/// Bi-directional variant (row 2 gains f_z, f_w). Provided for stepping
/// experiments only; the analysis modules assume f = 0.
Jacobian4 jacobian_bidirectional(const Params& p, const CouplingFunction& f,
                                 const CouplingFunction& g, const State4& s);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct AbsorbingBounds {
  Interval y;
  Interval w;
};

/// Forward-invariant box: y in [-delta, 1+delta],
/// w in [-delta - |g|/(1-beta), 1 + delta + |g|/(1-beta)].
AbsorbingBounds absorbing_bounds(const Params& p, const CouplingFunction& g,
                                 double delta = 0.0);

}  // namespace bakerdim
