#include "bakerdim/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace bakerdim {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

class ZeroCoupling final : public CouplingFunction {
 public:
  double eval(double, double) const override { return 0.0; }
  Grad2 grad(double, double) const override { return {0.0, 0.0}; }
  double sup_norm() const override { return 0.0; }
  double lip_const() const override { return 0.0; }
  std::string describe() const override { return "zero"; }
  bool is_zero() const override { return true; }
};

class ConstantCoupling final : public CouplingFunction {
 public:
  explicit ConstantCoupling(double c) : c_(c) {}
  double eval(double, double) const override { return c_; }
  Grad2 grad(double, double) const override { return {0.0, 0.0}; }
  double sup_norm() const override { return std::abs(c_); }
  double lip_const() const override { return 0.0; }
  std::string describe() const override { return "const(" + fmt(c_) + ")"; }
  bool is_zero() const override { return c_ == 0.0; }

 private:
  double c_;
};

class TrigCoupling final : public CouplingFunction {
 public:
  explicit TrigCoupling(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {
    for (const TrigTerm& t : terms_) {
      sup_ += std::abs(t.amplitude);
      lip_ += std::abs(t.amplitude) * kPi *
              std::max(std::abs(t.freq_x), std::abs(t.freq_y));
    }
  }

  double eval(double x, double y) const override {
    double v = 0.0;
    for (const TrigTerm& t : terms_)
      v += t.amplitude * std::cos(t.freq_x * kPi * x + t.phase_x) *
           std::sin(t.freq_y * kPi * y + t.phase_y);
    return v;
  }

  Grad2 grad(double x, double y) const override {
    Grad2 d;
    for (const TrigTerm& t : terms_) {
      const double ax = t.freq_x * kPi * x + t.phase_x;
      const double ay = t.freq_y * kPi * y + t.phase_y;
      d.gx += -t.amplitude * t.freq_x * kPi * std::sin(ax) * std::sin(ay);
      d.gy += t.amplitude * t.freq_y * kPi * std::cos(ax) * std::cos(ay);
    }
    return d;
  }

  double sup_norm() const override { return sup_; }
  double lip_const() const override { return lip_; }

  std::string describe() const override {
    std::string s = "trig[";
    for (size_t i = 0; i < terms_.size(); ++i) {
      const TrigTerm& t = terms_[i];
      if (i) s += ";";
      s += fmt(t.amplitude) + ":" + fmt(t.freq_x) + ":" + fmt(t.freq_y) + ":" +
           fmt(t.phase_x) + ":" + fmt(t.phase_y);
    }
    return s + "]";
  }

  bool is_zero() const override { return terms_.empty(); }

 private:
  std::vector<TrigTerm> terms_;
  double sup_ = 0.0;
  double lip_ = 0.0;
};

// Identity in y on [0,1]; quadratic C^1 ramps on [-1,0] and [1,2]; constant
// -1/2 and 3/2 beyond.
class ProbeCoupling final : public CouplingFunction {
 public:
  double eval(double, double y) const override {
    if (y <= -1.0) return -0.5;
    if (y < 0.0) return y + 0.5 * y * y;
    if (y <= 1.0) return y;
    if (y < 2.0) return y - 0.5 * (y - 1.0) * (y - 1.0);
    return 1.5;
  }

  Grad2 grad(double, double y) const override {
    if (y <= -1.0 || y >= 2.0) return {0.0, 0.0};
    if (y < 0.0) return {0.0, 1.0 + y};
    if (y <= 1.0) return {0.0, 1.0};
    return {0.0, 2.0 - y};
  }

  double sup_norm() const override { return 1.5; }
  double lip_const() const override { return 1.0; }
  std::string describe() const override { return "probe"; }
};

class SineSquaredTanh final : public CouplingFunction {
 public:
  double eval(double x, double y) const override {
    const double s = std::sin(2.0 * kPi * x);
    return s * s * std::tanh(y);
  }

  Grad2 grad(double x, double y) const override {
    const double s = std::sin(2.0 * kPi * x);
    const double th = std::tanh(y);
    return {2.0 * kPi * std::sin(4.0 * kPi * x) * th, s * s * (1.0 - th * th)};
  }

  double sup_norm() const override { return 1.0; }
  double lip_const() const override { return std::hypot(2.0 * kPi, 1.0); }
  std::string describe() const override { return "sin2tanh"; }
};

class CohomologousCoupling final : public CouplingFunction {
 public:
  CohomologousCoupling(const Params& p, CouplingPtr gtilde)
      : alpha_(p.alpha), beta_(p.beta), gtilde_(std::move(gtilde)) {}

  double eval(double x, double y) const override {
    const State2 fwd = baker_step_rate(alpha_, {x, y});
    return gtilde_->eval(fwd.x, fwd.y) - beta_ * gtilde_->eval(x, y);
  }

  Grad2 grad(double x, double y) const override {
    const State2 fwd = baker_step_rate(alpha_, {x, y});
    const Grad2 df = gtilde_->grad(fwd.x, fwd.y);
    const Grad2 dh = gtilde_->grad(x, y);
    return {2.0 * df.gx - beta_ * dh.gx, alpha_ * df.gy - beta_ * dh.gy};
  }

  double sup_norm() const override {
    return (1.0 + beta_) * gtilde_->sup_norm();
  }
  double lip_const() const override {
    return (2.0 + beta_) * gtilde_->lip_const();
  }
  std::string describe() const override {
    return "cohomologous(" + gtilde_->describe() + ")";
  }
  bool is_zero() const override { return gtilde_->is_zero(); }

 private:
  double alpha_;
  double beta_;
  CouplingPtr gtilde_;
};

class ScaledCoupling final : public CouplingFunction {
 public:
  ScaledCoupling(double lambda, CouplingPtr g) : lambda_(lambda), g_(std::move(g)) {}

  double eval(double x, double y) const override { return lambda_ * g_->eval(x, y); }
  Grad2 grad(double x, double y) const override {
    Grad2 d = g_->grad(x, y);
    return {lambda_ * d.gx, lambda_ * d.gy};
  }
  double sup_norm() const override { return std::abs(lambda_) * g_->sup_norm(); }
  double lip_const() const override { return std::abs(lambda_) * g_->lip_const(); }
  std::string describe() const override {
    return "scaled(" + fmt(lambda_) + "," + g_->describe() + ")";
  }
  bool is_zero() const override { return lambda_ == 0.0 || g_->is_zero(); }

 private:
  double lambda_;
  CouplingPtr g_;
};

class SumCoupling final : public CouplingFunction {
 public:
  SumCoupling(CouplingPtr a, CouplingPtr b) : a_(std::move(a)), b_(std::move(b)) {}

  double eval(double x, double y) const override {
    return a_->eval(x, y) + b_->eval(x, y);
  }
  Grad2 grad(double x, double y) const override {
    Grad2 da = a_->grad(x, y);
    Grad2 db = b_->grad(x, y);
    return {da.gx + db.gx, da.gy + db.gy};
  }
  double sup_norm() const override { return a_->sup_norm() + b_->sup_norm(); }
  double lip_const() const override { return a_->lip_const() + b_->lip_const(); }
  std::string describe() const override {
    return "sum(" + a_->describe() + "," + b_->describe() + ")";
  }
  bool is_zero() const override { return a_->is_zero() && b_->is_zero(); }

 private:
  CouplingPtr a_;
  CouplingPtr b_;
};

}  // namespace

CouplingPtr make_zero_coupling() { return std::make_shared<ZeroCoupling>(); }

CouplingPtr make_trig_coupling(std::vector<TrigTerm> terms) {
  if (terms.empty()) return make_zero_coupling();
  return std::make_shared<TrigCoupling>(std::move(terms));
}

CouplingPtr make_probe_coupling() { return std::make_shared<ProbeCoupling>(); }

CouplingPtr make_cohomologous_coupling(const Params& p, CouplingPtr gtilde) {
  return std::make_shared<CohomologousCoupling>(p, std::move(gtilde));
}

CouplingPtr make_sine_squared_tanh() { return std::make_shared<SineSquaredTanh>(); }

CouplingPtr make_constant_coupling(double c) {
  return std::make_shared<ConstantCoupling>(c);
}

CouplingPtr scale_coupling(double lambda, CouplingPtr g) {
  return std::make_shared<ScaledCoupling>(lambda, std::move(g));
}

CouplingPtr add_coupling(CouplingPtr a, CouplingPtr b) {
  return std::make_shared<SumCoupling>(std::move(a), std::move(b));
}

State2 baker_step_rate(double rate, State2 s) {
  if (s.x < 0.5) return {2.0 * s.x, rate * s.y};
  return {2.0 * s.x - 1.0, rate * s.y + (1.0 - rate)};
}

State2 baker_inverse_rate(double rate, State2 s) {
  if (!on_inverse_slab(rate, s.y))
    throw std::domain_error("baker_inverse: y outside the attractor slab");
  if (s.y <= 0.5) return {0.5 * s.x, s.y / rate};
  return {0.5 * (s.x + 1.0), (s.y - (1.0 - rate)) / rate};
}

State4 coupled_step(const Params& p, const CouplingFunction& f,
                    const CouplingFunction& g, State4 s) {
  const double fy = f.is_zero() ? 0.0 : f.eval(s.z, s.w);
  const double gw = g.is_zero() ? 0.0 : g.eval(s.x, s.y);
  State4 out;
  if (s.x < 0.5) {
    out.x = 2.0 * s.x;
    out.y = p.alpha * s.y + fy;
  } else {
    out.x = 2.0 * s.x - 1.0;
    out.y = p.alpha * s.y + (1.0 - p.alpha) + fy;
  }
  if (s.z < 0.5) {
    out.z = 2.0 * s.z;
    out.w = p.beta * s.w + gw;
  } else {
    out.z = 2.0 * s.z - 1.0;
    out.w = p.beta * s.w + (1.0 - p.beta) + gw;
  }
  return out;
}

State4 coupled_step(const Params& p, const CouplingFunction& g, State4 s) {
  const double gw = g.is_zero() ? 0.0 : g.eval(s.x, s.y);
  State4 out;
  if (s.x < 0.5) {
    out.x = 2.0 * s.x;
    out.y = p.alpha * s.y;
  } else {
    out.x = 2.0 * s.x - 1.0;
    out.y = p.alpha * s.y + (1.0 - p.alpha);
  }
  if (s.z < 0.5) {
    out.z = 2.0 * s.z;
    out.w = p.beta * s.w + gw;
  } else {
    out.z = 2.0 * s.z - 1.0;
    out.w = p.beta * s.w + (1.0 - p.beta) + gw;
  }
  return out;
}

namespace {

bool on_seam(double v) { return v == 0.0 || v == 0.5; }

}  // namespace

Jacobian4 jacobian(const Params& p, const CouplingFunction& g, const State4& s) {
  Jacobian4 j;
  j.at_branch_boundary = on_seam(s.x) || on_seam(s.z);
  const Grad2 d = g.grad(s.x, s.y);
  j.m[0][0] = 2.0;
  j.m[1][1] = p.alpha;
  j.m[2][2] = 2.0;
  j.m[3][0] = d.gx;
  j.m[3][1] = d.gy;
  j.m[3][3] = p.beta;
  return j;
}

Jacobian4 jacobian_bidirectional(const Params& p, const CouplingFunction& f,
                                 const CouplingFunction& g, const State4& s) {
  Jacobian4 j = jacobian(p, g, s);
  const Grad2 d = f.grad(s.z, s.w);
  j.m[1][2] = d.gx;
  j.m[1][3] = d.gy;
  return j;
}

AbsorbingBounds absorbing_bounds(const Params& p, const CouplingFunction& g,
                                 double delta) {
  const double pad = g.sup_norm() / (1.0 - p.beta);
  AbsorbingBounds b;
  b.y = {-delta, 1.0 + delta};
  b.w = {-delta - pad, 1.0 + delta + pad};
  return b;
}

}  // namespace bakerdim
