#include "doctest.h"
#include "rhsolve/analysis.hpp"
#include "rhsolve/errors.hpp"
#include "support/generators.hpp"

using namespace rhsolve;
using namespace rhsolve::testing;

TEST_CASE("harmonic measure values") {
  const double q = 0.3;
  const HarmonicMeasure h1(q), h0(q, 0);
  for (double t : {0.0, 1.0, 4.0}) {
    CHECK(h1(std::polar(q, t)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h1(std::polar(1.0, t)) == 0.0);
    CHECK(h1(std::polar(std::sqrt(q), t)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h0(std::polar(0.6, t)) == doctest::Approx(1.0 - h1(std::polar(0.6, t))).epsilon(1e-15));
  }
  CHECK_THROWS_AS(HarmonicMeasure(1.0), std::invalid_argument);
  CHECK_THROWS_AS(HarmonicMeasure(0.5, 2), std::invalid_argument);
}

TEST_CASE("identity examples") {
  const double q = 0.5;
  const auto one = TrigPolynomial::constant(1.0);
  {
    const auto s = solve_annulus_radial(one, TrigPolynomial::constant(q), q);
    const auto r = check_identity(s, one, TrigPolynomial::constant(q));
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.zeros_used.empty());
    CHECK(r.k1 == 1);
    CHECK(r.rhs == 1.0);
    CHECK(r.diff < 1e-14);
  }
  {
    const auto s = solve_annulus_radial(one, one, q);
    const auto r = check_identity(s, one, one);
    CHECK(std::abs(r.lhs) < 1e-15);
    CHECK(r.rhs == 0.0);
    CHECK(r.k1 == 0);
  }
  {
    const auto r1 = TrigPolynomial::constant(std::pow(q, 0.3));
    const auto s = solve_annulus_radial(one, r1, q, 0.7);
    const auto r = check_identity(s, builtin_circle_family(one), builtin_circle_family(r1));
    CHECK(r.lhs == doctest::Approx(0.3).epsilon(1e-12));
    REQUIRE(r.zeros_used.size() == 1);
    CHECK(std::abs(std::abs(r.zeros_used[0].position) - std::pow(q, 0.3)) < 1e-8);
    CHECK(r.k1 == 0);
    CHECK(r.k1_coherent == 0);
    CHECK(r.diff < 1e-6);
    CHECK(r.diff == std::abs(r.lhs - r.rhs));
  }
}

TEST_CASE("identity rejects non-radial families") {
  const auto one = TrigPolynomial::constant(1.0);
  const auto s = solve_annulus_radial(one, one, 0.5);
  const auto ellipse = builtin_ellipse_family(TrigPolynomial::constant(2.0), one);
  CHECK_THROWS_AS(check_identity(s, ellipse, builtin_circle_family(one)), NotRadialFamily);
  CHECK_THROWS_AS(check_identity(s, builtin_circle_family(one), ellipse), NotRadialFamily);
}

TEST_CASE("identity on random radial data") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double q = trial % 2 ? 0.25 : 0.5;
    const auto r0 = random_positive_trig(rng, 3, 1.0 + u(rng), 0.3);
    const double s_target = -1.0 + trial * 0.4 + 0.1 + 0.8 * u(rng);
    const auto r1 = random_positive_trig(rng, 3, 1.0, 0.3);
    const auto base = [&](const TrigPolynomial& p) {
      std::vector<double> l0(256), l1(256);
      const BoundaryGrid g(256);
      for (int j = 0; j < 256; ++j) {
        l0[j] = std::log(r0(g.node(j)));
        l1[j] = std::log(p(g.node(j)));
      }
      return harmonic_extend_annulus(l0, l1, q).c_log;
    };
    // Shift the mean of log R1 so that c_log hits s_target.
    const double shift = (s_target - base(r1)) * std::log(q);
    std::vector<double> c1 = r1.flat();
    for (double& c : c1) c *= std::exp(shift);
    const TrigPolynomial r1s(c1);
    const auto s = solve_annulus_radial(r0, r1s, q, 2 * kPi * u(rng));
    const auto r = check_identity(s, r0, r1s);
    CHECK(r.lhs == doctest::Approx(s_target).epsilon(1e-9));
    CHECK(r.diff < 1e-6);
    CHECK(r.k1 == static_cast<int>(std::floor(s_target)));
  }
}

TEST_CASE("surjectivity demonstration") {
  std::vector<double> targets;
  for (int i = 0; i < 10; ++i) targets.push_back(0.1 * i);
  for (double q : {0.25, 0.5}) {
    const auto rows = surjectivity_demo(targets, q, 0.4);
    REQUIRE(rows.size() == targets.size());
    CHECK(rows[0].zero_count == 0);
    CHECK(rows[0].error == 0.0);
    for (const auto& row : rows) {
      CHECK(row.error < 1e-6);
      CHECK(row.zero_count <= 1);
    }
    REQUIRE(rows[5].zero);
    CHECK(std::abs(std::abs(*rows[5].zero) - std::sqrt(q)) < 1e-8);
  }
  CHECK_THROWS_AS(surjectivity_demo({1.0}, 0.5), std::invalid_argument);
}

TEST_CASE("minimal zero selector") {
  const double q = 0.4;
  {
    const auto m = minimal_zero_selector(2.0, q);
    CHECK(m.k1 == 2);
    CHECK_FALSE(m.zero_radius);
  }
  {
    const auto m = minimal_zero_selector(0.5, q);
    CHECK(m.k1 == 0);
    REQUIRE(m.zero_radius);
    CHECK(*m.zero_radius == doctest::Approx(std::sqrt(q)));
  }
  {
    const auto m = minimal_zero_selector(-0.25, q);
    CHECK(m.k1 == -1);
    REQUIRE(m.zero_radius);
    CHECK(*m.zero_radius == doctest::Approx(std::pow(q, 0.75)));
    // Oracle: the closed-form solver with c_log = -0.25 has exactly this zero.
    const auto s = solve_annulus_radial(TrigPolynomial::constant(1.0), TrigPolynomial::constant(std::pow(q, -0.25)), q);
    CHECK(s.zero_count() == 1);
    CHECK(s.windings.gamma1_disc == -1);
    CHECK(std::abs(std::abs(s.zeros[0].position) - *m.zero_radius) < 1e-8);
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double s = u(rng);
    const auto m = minimal_zero_selector(s, q);
    CHECK(m.k1 <= s);
    CHECK(s < m.k1 + 1);
    if (m.zero_radius) {
      CHECK(*m.zero_radius > q);
      CHECK(*m.zero_radius <= 1.0);
      CHECK(m.k1 + HarmonicMeasure(q)(*m.zero_radius) == doctest::Approx(s).epsilon(1e-12));
    }
  }
}
