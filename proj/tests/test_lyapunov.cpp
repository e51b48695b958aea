#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bakerdim/lyapunov.hpp"
#include "bakerdim/rng.hpp"

using namespace bakerdim;

namespace {

CouplingPtr demo_trig() { return make_trig_coupling({{1.0, 0.5, 1.5, 0.0, 0.0}}); }

}  // namespace

TEST_CASE("exact spectrum values and ordering") {
  ExponentSpectrum s = lyapunov_exact(Params(0.05, 0.2));
  const double l2 = std::log(2.0);
  CHECK(s.values[0] == doctest::Approx(l2).epsilon(1e-15));
  CHECK(s.values[1] == doctest::Approx(l2).epsilon(1e-15));
  CHECK(s.values[2] == doctest::Approx(std::log(0.2)).epsilon(1e-15));
  CHECK(s.values[3] == doctest::Approx(std::log(0.05)).epsilon(1e-15));
  CHECK(s.values[2] == doctest::Approx(-1.6094).epsilon(1e-4));
  CHECK(s.values[3] == doctest::Approx(-2.9957).epsilon(1e-4));

  s = lyapunov_exact(Params(0.3, 0.3));
  CHECK(s.values[2] == doctest::Approx(-1.2040).epsilon(1e-4));
  CHECK(s.values[3] == s.values[2]);

  SplitMix64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Params p(0.02 + 0.46 * rng.next_unit(), 0.02 + 0.46 * rng.next_unit());
    s = lyapunov_exact(p);
    for (int k = 0; k + 1 < 4; ++k) CHECK(s.values[k] >= s.values[k + 1]);
  }
}

TEST_CASE("numerical spectrum matches the closed form to 1e-6") {
  const long long n = 10000;

  ExponentSpectrum s =
      lyapunov_numerical(Params(0.3, 0.2), *make_zero_coupling(),
                         {0.387, 0.71, 0.613, 0.29}, n);
  ExponentSpectrum e = lyapunov_exact(Params(0.3, 0.2));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.values[i] - e.values[i]) <= 1e-6);
  CHECK(s.converged);

  // coupling does not shift the exponents
  s = lyapunov_numerical(Params(0.4, 0.43), *demo_trig(), {0.387, 0.71, 0.613, 0.29},
                         n);
  e = lyapunov_exact(Params(0.4, 0.43));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.values[i] - e.values[i]) <= 1e-6);

  SplitMix64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Params p(0.05 + 0.4 * rng.next_unit(), 0.05 + 0.4 * rng.next_unit());
    const CouplingPtr g = make_trig_coupling(
        {{rng.next_unit(), 1.0, 2.0, rng.next_unit(), rng.next_unit()}});
    const State4 start{rng.next_unit(), rng.next_unit(), rng.next_unit(),
                       rng.next_unit()};
    s = lyapunov_numerical(p, *g, start, n);
    e = lyapunov_exact(p);
    for (int i = 0; i < 4; ++i) REQUIRE(std::abs(s.values[i] - e.values[i]) <= 1e-6);
  }
}

TEST_CASE("fixed point orbit gives the exact diagonal logs in one step") {
  const Params p(0.4, 0.43);
  const ExponentSpectrum s =
      lyapunov_numerical(p, *demo_trig(), {0, 0, 0, 0}, 1, 1);
  CHECK(s.values[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(s.values[1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(s.values[2] == doctest::Approx(std::log(0.43)).epsilon(1e-12));
  CHECK(s.values[3] == doctest::Approx(std::log(0.4)).epsilon(1e-12));
  CHECK(s.restarts == 0);
}

TEST_CASE("seam starts are perturbed and recorded") {
  const Params p(0.3, 0.2);
  const ExponentSpectrum s = lyapunov_numerical(p, *make_zero_coupling(),
                                                {0.5, 0.3, 0.25, 0.4}, 2000);
  CHECK(s.restarts >= 1);
  const ExponentSpectrum e = lyapunov_exact(p);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.values[i] - e.values[i]) <= 1e-6);
}

TEST_CASE("history convergence check") {
  std::vector<std::array<double, 4>> h;
  CHECK(history_converged(h));
  h.push_back({1.0, 0.5, -1.0, -2.0});
  CHECK(history_converged(h));
  h.push_back({1.0, 0.5, -1.0, -2.0 + 5e-5});
  CHECK(history_converged(h));
  h.push_back({1.0, 0.5, -1.0, -2.0 + 3e-4});
  CHECK_FALSE(history_converged(h));
}

TEST_CASE("kaplan_yorke three-case definition") {
  {
    const double chi[] = {0.5, -0.3, -1.0};
    const DimensionValue d = kaplan_yorke(std::span<const double>(chi, 3));
    CHECK(d.j_index == 2);
    CHECK(d.value == doctest::Approx(2.0 + 0.2 / 1.0).epsilon(1e-12));
  }
  {
    const double chi[] = {-0.1, -0.2};
    const DimensionValue d = kaplan_yorke(std::span<const double>(chi, 2));
    CHECK(d.j_index == 0);
    CHECK(d.value == 0.0);
  }
  {
    const double chi[] = {0.3, 0.1};
    const DimensionValue d = kaplan_yorke(std::span<const double>(chi, 2));
    CHECK(d.j_index == 2);
    CHECK(d.value == 2.0);
  }
  {
    // partial sum exactly zero counts as nonnegative
    const double chi[] = {0.5, -0.5, -1.0};
    const DimensionValue d = kaplan_yorke(std::span<const double>(chi, 3));
    CHECK(d.j_index == 2);
    CHECK(d.value == 2.0);
  }
}

TEST_CASE("kaplan_yorke never decreases when an exponent increases") {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> chi(4);
    for (double& c : chi) c = 2.0 * rng.next_unit() - 1.2;
    std::sort(chi.begin(), chi.end(), std::greater<>());
    const double base = kaplan_yorke(chi).value;
    std::vector<double> up = chi;
    const std::size_t which = rng.next() % 4;
    up[which] += rng.next_unit();
    std::sort(up.begin(), up.end(), std::greater<>());
    CHECK(kaplan_yorke(up).value >= base - 1e-12);
  }
}

TEST_CASE("closed-form Lyapunov dimension examples") {
  // branch seam: both expressions give exactly 3
  CHECK(dl_uncoupled_closed_form(Params(0.05, 0.25)) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(dl_uncoupled_closed_form(Params(0.4, 0.43)) ==
        doctest::Approx(3.5919).epsilon(2e-5));
  CHECK(dl_uncoupled_closed_form(Params(0.05, 0.05)) ==
        doctest::Approx(2.4628).epsilon(2e-5));
  CHECK(dl_uncoupled_closed_form(Params(0.1, 0.4)) ==
        doctest::Approx(3.2041).epsilon(2e-5));
  // symmetric in the two rates
  CHECK(dl_uncoupled_closed_form(Params(0.4, 0.1)) ==
        dl_uncoupled_closed_form(Params(0.1, 0.4)));
}

TEST_CASE("closed-form information dimension examples") {
  CHECK(d1_uncoupled_closed_form(Params(0.05, 0.05)) ==
        doctest::Approx(2.4628).epsilon(2e-5));
  CHECK(d1_uncoupled_closed_form(Params(0.05, 0.05)) ==
        doctest::Approx(dl_uncoupled_closed_form(Params(0.05, 0.05))).epsilon(1e-12));
  CHECK(d1_uncoupled_closed_form(Params(0.4, 0.43)) ==
        doctest::Approx(3.5778).epsilon(2e-5));
  CHECK(d1_uncoupled_closed_form(Params(0.4, 0.43)) <
        dl_uncoupled_closed_form(Params(0.4, 0.43)));
  CHECK(d1_uncoupled_closed_form(Params(0.05, 0.2)) ==
        doctest::Approx(2.6621).epsilon(2e-5));
  CHECK(d1_uncoupled_closed_form(Params(0.1, 0.4)) ==
        doctest::Approx(3.0575).epsilon(2e-5));
}

TEST_CASE("kaplan_yorke of the exact spectrum equals the closed form on a grid") {
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const Params p(0.03 + 0.044 * i, 0.03 + 0.044 * j);
      const double ky = kaplan_yorke(lyapunov_exact(p)).value;
      const double cf = dl_uncoupled_closed_form(p);
      REQUIRE(std::abs(ky - cf) <= 1e-12);
      // dimension ordering with equality exactly on the diagonal
      const double d1 = d1_uncoupled_closed_form(p);
      REQUIRE(d1 <= cf + 1e-12);
      if (i == j)
        REQUIRE(std::abs(d1 - cf) <= 1e-12);
      else
        REQUIRE(cf - d1 > 1e-6);
    }
}

TEST_CASE("Lyapunov dimension is continuous across the branch seam") {
  const Params left(0.05, 0.25 - 1e-12);
  const Params right(0.05, 0.25 + 1e-12);
  CHECK(std::abs(dl_uncoupled_closed_form(left) -
                 dl_uncoupled_closed_form(right)) <= 1e-10);
}
