#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bakerdim/dynamics.hpp"
#include "bakerdim/rng.hpp"

using namespace bakerdim;

namespace {

constexpr double kPi = std::numbers::pi;

CouplingPtr demo_trig() { return make_trig_coupling({{1.0, 0.5, 1.5, 0.0, 0.0}}); }

}  // namespace

TEST_CASE("params reject rates outside (0, 1/2)") {
  CHECK_THROWS_AS(Params(0.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(Params(0.5, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(Params(0.3, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(Params(0.3, 0.7), std::invalid_argument);
  CHECK_NOTHROW(Params(0.499, 0.001));
}

TEST_CASE("baker_step matches the branch formulas") {
  const Params p(0.25, 0.3);
  State2 s = baker_step(p, {0.0, 0.0});
  CHECK(s.x == 0.0);
  CHECK(s.y == 0.0);

  s = baker_step(p, {0.75, 0.5});
  CHECK(s.x == doctest::Approx(2 * 0.75 - 1).epsilon(1e-15));
  CHECK(s.y == doctest::Approx(0.25 * 0.5 + (1 - 0.25)).epsilon(1e-15));

  const Params p4(0.4, 0.3);
  s = baker_step(p4, {0.5, 1.0});  // seam takes the right branch
  CHECK(s.x == 0.0);
  CHECK(s.y == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("baker_inverse undoes baker_step on the slab") {
  const Params p(0.25, 0.3);
  State2 s = baker_inverse(p, {0.5, 0.875});
  CHECK(s.x == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(s.y == doctest::Approx(0.5).epsilon(1e-15));

  s = baker_inverse(p, {0.0, 0.0});
  CHECK(s.x == 0.0);
  CHECK(s.y == 0.0);

  CHECK_THROWS_AS(baker_inverse(p, {0.0, 0.5}), std::domain_error);

  SplitMix64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const State2 v{rng.next_unit(), rng.next_unit()};
    const State2 fwd = baker_step(p, v);
    const State2 back = baker_inverse(p, fwd);
    CHECK(back.x == doctest::Approx(v.x).epsilon(1e-14));
    CHECK(back.y == doctest::Approx(v.y).epsilon(1e-12));
  }
}

TEST_CASE("coupled_step reduces to the product map when f=g=0") {
  const Params p(0.4, 0.43);
  const CouplingPtr zero = make_zero_coupling();
  SplitMix64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const State4 s{rng.next_unit(), 2 * rng.next_unit() - 0.5, rng.next_unit(),
                   2 * rng.next_unit() - 0.5};
    const State4 out = coupled_step(p, *zero, *zero, s);
    const State2 xy = baker_step_rate(p.alpha, {s.x, s.y});
    const State2 zw = baker_step_rate(p.beta, {s.z, s.w});
    CHECK(out.x == xy.x);
    CHECK(out.y == xy.y);
    CHECK(out.z == zw.x);
    CHECK(out.w == zw.y);
  }
}

TEST_CASE("coupled_step uses the input state for branches and coupling") {
  const Params p(0.4, 0.43);
  const CouplingPtr g = demo_trig();
  const CouplingPtr zero = make_zero_coupling();

  State4 out = coupled_step(p, *zero, *g, {0, 0, 0, 0});
  CHECK(out.x == 0.0);
  CHECK(out.y == 0.0);
  CHECK(out.z == 0.0);
  CHECK(out.w == doctest::Approx(0.0).epsilon(1e-15));  // g(0,0) = 0

  out = coupled_step(p, *zero, *g, {0, 1, 0, 0});
  CHECK(out.y == doctest::Approx(0.4).epsilon(1e-15));
  // g(0,1) = cos(0) sin(3pi/2) = -1
  CHECK(out.w == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("branch consistency over random states") {
  const Params p(0.2, 0.45);
  const CouplingPtr g = demo_trig();
  SplitMix64 rng(11);
  for (int i = 0; i < 100000; ++i) {
    const State4 s{rng.next_unit(), rng.next_unit(), rng.next_unit(),
                   rng.next_unit()};
    const State4 out = coupled_step(p, *g, s);
    if (s.x < 0.5)
      CHECK(out.x == 2.0 * s.x);
    else
      CHECK(out.x == 2.0 * s.x - 1.0);
    if (s.z < 0.5)
      CHECK(out.z == 2.0 * s.z);
    else
      CHECK(out.z == 2.0 * s.z - 1.0);
  }
}

TEST_CASE("uncoupled (x,y) orbit is bitwise independent of (z,w) start") {
  const Params p(0.3, 0.2);
  const CouplingPtr zero = make_zero_coupling();
  State4 a{0.123456, 0.7, 0.9, 0.1};
  State4 b{0.123456, 0.7, 0.4, -2.5};
  for (int i = 0; i < 2000; ++i) {
    a = coupled_step(p, *zero, *zero, a);
    b = coupled_step(p, *zero, *zero, b);
    REQUIRE(a.x == b.x);
    REQUIRE(a.y == b.y);
  }
}

TEST_CASE("jacobian has the triangular pattern with fixed diagonal") {
  const Params p(0.4, 0.43);
  const CouplingPtr g = demo_trig();
  SplitMix64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const State4 s{rng.next_unit(), rng.next_unit(), rng.next_unit(),
                   rng.next_unit()};
    const Jacobian4 j = jacobian(p, *g, s);
    CHECK(j.m[0][0] == 2.0);
    CHECK(j.m[1][1] == p.alpha);
    CHECK(j.m[2][2] == 2.0);
    CHECK(j.m[3][3] == p.beta);
    // zero pattern outside the seven allowed entries
    CHECK(j.m[0][1] == 0.0);
    CHECK(j.m[0][2] == 0.0);
    CHECK(j.m[0][3] == 0.0);
    CHECK(j.m[1][0] == 0.0);
    CHECK(j.m[1][2] == 0.0);
    CHECK(j.m[1][3] == 0.0);
    CHECK(j.m[2][0] == 0.0);
    CHECK(j.m[2][1] == 0.0);
    CHECK(j.m[2][3] == 0.0);
    CHECK(j.m[3][2] == 0.0);
  }

  const Jacobian4 j = jacobian(p, *g, {0.0, 0.0, 0.25, 0.3});
  CHECK(j.m[3][0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(j.m[3][1] == doctest::Approx(1.5 * kPi).epsilon(1e-14));
  CHECK(j.at_branch_boundary);  // x = 0 sits on the boundary set
  CHECK_FALSE(jacobian(p, *g, {0.3, 0.0, 0.25, 0.3}).at_branch_boundary);
  CHECK(jacobian(p, *g, {0.3, 0.0, 0.5, 0.3}).at_branch_boundary);
}

TEST_CASE("jacobian columns match finite differences of the step") {
  const Params p(0.35, 0.22);
  const CouplingPtr g = demo_trig();
  const CouplingPtr zero = make_zero_coupling();
  const double h = 1e-6;
  SplitMix64 rng(17);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    // keep x,z away from the seams so the difference stays on one branch
    const double x = 0.05 + 0.4 * rng.next_unit() + (rng.next() & 1 ? 0.5 : 0.0);
    const double z = 0.05 + 0.4 * rng.next_unit() + (rng.next() & 1 ? 0.5 : 0.0);
    const State4 s{x, rng.next_unit(), z, rng.next_unit()};
    const Jacobian4 j = jacobian(p, *g, s);
    const State4 base = coupled_step(p, *zero, *g, s);
    for (int dir = 0; dir < 4; ++dir) {
      State4 sp = s;
      (&sp.x)[dir] += h;
      const State4 bumped = coupled_step(p, *zero, *g, sp);
      const double fd[4] = {bumped.x - base.x, bumped.y - base.y,
                            bumped.z - base.z, bumped.w - base.w};
      for (int r = 0; r < 4; ++r)
        worst = std::max(worst, std::abs(fd[r] - j.m[r][dir] * h));
    }
  }
  CHECK(worst <= 10.0 * h);
}

TEST_CASE("bidirectional jacobian mirrors the pattern into row 2") {
  const Params p(0.3, 0.2);
  const CouplingPtr f = demo_trig();
  const CouplingPtr g = make_probe_coupling();
  const State4 s{0.3, 0.6, 0.2, 0.4};
  const Jacobian4 j = jacobian_bidirectional(p, *f, *g, s);
  const Grad2 df = f->grad(s.z, s.w);
  CHECK(j.m[1][2] == df.gx);
  CHECK(j.m[1][3] == df.gy);
  CHECK(j.m[3][1] == 1.0);  // probe slope
}

TEST_CASE("trig coupling family") {
  const CouplingPtr g = demo_trig();
  CHECK(g->eval(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g->sup_norm() == 1.0);
  CHECK(g->lip_const() == doctest::Approx(1.5 * kPi).epsilon(1e-14));

  const CouplingPtr empty = make_trig_coupling({});
  CHECK(empty->is_zero());
  CHECK(empty->sup_norm() == 0.0);
  CHECK(empty->lip_const() == 0.0);
  CHECK(empty->eval(0.3, 0.9) == 0.0);
}

TEST_CASE("coupling gradients agree with finite differences") {
  const double h = 1e-6;
  const std::vector<CouplingPtr> fields = {
      demo_trig(), make_probe_coupling(), make_sine_squared_tanh(),
      make_cohomologous_coupling(Params(0.1, 0.4), make_sine_squared_tanh())};
  SplitMix64 rng(23);
  for (const CouplingPtr& g : fields) {
    for (int i = 0; i < 200; ++i) {
      const double x = 0.02 + 0.45 * rng.next_unit();  // stay inside one branch
      const double y = 2.5 * rng.next_unit() - 1.0;
      const Grad2 d = g->grad(x, y);
      const double fx = (g->eval(x + h, y) - g->eval(x - h, y)) / (2 * h);
      const double fy = (g->eval(x, y + h) - g->eval(x, y - h)) / (2 * h);
      CHECK(std::abs(fx - d.gx) <= 1e-5 * std::max(1.0, std::abs(d.gx)));
      CHECK(std::abs(fy - d.gy) <= 1e-5 * std::max(1.0, std::abs(d.gy)));
      CHECK(std::abs(g->eval(x, y)) <= g->sup_norm() + 1e-12);
    }
  }
}

TEST_CASE("probe is the identity on the strip and saturates outside") {
  const CouplingPtr p = make_probe_coupling();
  CHECK(p->eval(0.3, 0.7) == 0.7);
  CHECK(p->grad(0.3, 0.7).gy == 1.0);
  CHECK(p->grad(0.3, 0.7).gx == 0.0);
  CHECK(p->eval(0.3, 10.0) == 1.5);
  CHECK(std::abs(p->eval(0.3, 10.0)) <= p->sup_norm());
  CHECK(p->eval(0.9, -5.0) == -0.5);
  // C^1 joins
  CHECK(p->eval(0.1, 1.0) == doctest::Approx(1.0));
  CHECK(p->grad(0.1, 2.0).gy == doctest::Approx(0.0));
  CHECK(p->grad(0.1, -1.0).gy == doctest::Approx(0.0));
}

TEST_CASE("cohomologous coupling of a constant is c(1-beta)") {
  const Params p(0.3, 0.2);
  const CouplingPtr g = make_cohomologous_coupling(p, make_constant_coupling(0.7));
  SplitMix64 rng(29);
  for (int i = 0; i < 100; ++i) {
    const double v = g->eval(rng.next_unit(), rng.next_unit());
    CHECK(v == doctest::Approx(0.7 * (1 - 0.2)).epsilon(1e-15));
  }
}

TEST_CASE("absorbing bounds") {
  const Params p(0.4, 0.43);
  const CouplingPtr zero = make_zero_coupling();
  AbsorbingBounds b = absorbing_bounds(p, *zero, 0.0);
  CHECK(b.w.lo == 0.0);
  CHECK(b.w.hi == 1.0);
  CHECK(b.y.lo == 0.0);
  CHECK(b.y.hi == 1.0);

  const CouplingPtr one = make_constant_coupling(1.0);
  b = absorbing_bounds(p, *one, 0.0);
  CHECK(b.w.lo == doctest::Approx(-1.0 / (1 - 0.43)).epsilon(1e-15));
  CHECK(b.w.hi == doctest::Approx(1.0 + 1.0 / (1 - 0.43)).epsilon(1e-15));
}

TEST_CASE("orbits started in the absorbing box never leave it") {
  const Params p(0.4, 0.43);
  const CouplingPtr g = demo_trig();
  const AbsorbingBounds box = absorbing_bounds(p, *g, 0.0);
  // Containment is checked against a hair of padding: the exact-arithmetic
  // image is inside the closed box, and round-off slop stays below 1e-12.
  const AbsorbingBounds pad = absorbing_bounds(p, *g, 1e-12);
  SplitMix64 rng(31);
  for (int trial = 0; trial < 10000; ++trial) {
    State4 s{rng.next_unit(),
             box.y.lo + (box.y.hi - box.y.lo) * rng.next_unit(), rng.next_unit(),
             box.w.lo + (box.w.hi - box.w.lo) * rng.next_unit()};
    const int steps = trial < 100 ? 1000 : 50;  // a few long orbits, many short
    for (int i = 0; i < steps; ++i) {
      s = coupled_step(p, *g, s);
      REQUIRE(s.x >= 0.0);
      REQUIRE(s.x < 1.0);
      REQUIRE(s.z >= 0.0);
      REQUIRE(s.z < 1.0);
      REQUIRE(s.y >= pad.y.lo);
      REQUIRE(s.y <= pad.y.hi);
      REQUIRE(s.w >= pad.w.lo);
      REQUIRE(s.w <= pad.w.hi);
    }
  }
}
