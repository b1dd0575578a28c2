#include "doctest.h"
#include "rhsolve/curve_families.hpp"
#include "rhsolve/disc_solver.hpp"
#include "rhsolve/errors.hpp"
#include "support/generators.hpp"

using namespace rhsolve;
using namespace rhsolve::testing;

namespace {

CurveFamily unit_circle() { return builtin_circle_family(TrigPolynomial::constant(1.0)); }

CurveFamily ellipse21() {
  return builtin_ellipse_family(TrigPolynomial::constant(2.0), TrigPolynomial::constant(1.0));
}

BoundaryTrace ellipse_trace(int N, double p, double q) {
  return BoundaryTrace::sample(BoundaryGrid(N), [&](double t) { return cplx(p * std::cos(t), q * std::sin(t)); });
}

struct FdError {
  double wbar = 0.0;
  double w = 0.0;
  double theta = 0.0;
};

// Central differences of rho in Re w, Im w and theta against the closed forms.
FdError wirtinger_fd(const CurveFamily& f, double theta, cplx w, double h = 1e-5) {
  const double rx = (f.rho(theta, w + h) - f.rho(theta, w - h)) / (2 * h);
  const double ry = (f.rho(theta, w + cplx(0, h)) - f.rho(theta, w - cplx(0, h))) / (2 * h);
  const double rt = (f.rho(theta + h, w) - f.rho(theta - h, w)) / (2 * h);
  const cplx wbar = 0.5 * cplx(rx, ry);
  const cplx dw = 0.5 * cplx(rx, -ry);
  return {std::abs(wbar - f.d_wbar(theta, w)), std::abs(dw - f.d_w(theta, w)),
          std::abs(rt - f.d_theta(theta, w))};
}

}  // namespace

TEST_CASE("circle family examples") {
  const auto f = unit_circle();
  CHECK(f.rho(0.0, 1.0) == doctest::Approx(0.0));
  CHECK(f.rho(0.0, 0.0) == doctest::Approx(-1.0));

  const auto c = builtin_circle_family(TrigPolynomial::constant(1.0), TrigPolynomial::constant(0.2));
  for (double t : {0.0, 1.0, 2.5, 5.0}) CHECK(std::abs(c.rho(t, 1.2)) < 1e-15);
  CHECK(c.d_wbar(0.3, 1.2) == cplx(1.0, 0.0));
}

TEST_CASE("circle family with exponential radius") {
  // e^{cos theta} is not a trig polynomial; a degree-16 truncation of its
  // Fourier series is exact to double precision.
  std::vector<double> c{std::cyl_bessel_i(0.0, 1.0)};
  for (int k = 1; k <= 16; ++k) {
    c.push_back(2.0 * std::cyl_bessel_i(double(k), 1.0));
    c.push_back(0.0);
  }
  const auto f = builtin_circle_family(TrigPolynomial(c));
  CHECK(std::abs(f.rho(kPi / 2, cplx(0, 1))) < 1e-14);
  CHECK(std::abs(f.rho(0.0, std::exp(1.0))) < 1e-13);
}

TEST_CASE("circle family must enclose the origin") {
  CHECK_THROWS_AS(builtin_circle_family(TrigPolynomial::constant(0.5), TrigPolynomial::constant(0.6)),
                  ZeroNotEnclosed);
  CHECK_THROWS_AS(builtin_circle_family(TrigPolynomial({0.5, 0.6, 0.0})), ZeroNotEnclosed);
}

TEST_CASE("ellipse family examples") {
  const auto unit = builtin_ellipse_family(TrigPolynomial::constant(1.0), TrigPolynomial::constant(1.0));
  for (double t : {0.0, 0.7, 3.1}) CHECK(std::abs(unit.rho(t, std::polar(1.0, t))) < 1e-15);

  const auto e = ellipse21();
  CHECK(std::abs(e.rho(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(e.rho(0.0, cplx(0, 1))) < 1e-15);
  CHECK(std::abs(e.d_wbar(0.0, 2.0) - 0.5) < 1e-15);
  CHECK(wirtinger_fd(e, 0.0, 2.0).wbar < 1e-6);

  CHECK_THROWS_AS(builtin_ellipse_family(TrigPolynomial::constant(1.0), TrigPolynomial::constant(-0.1)),
                  DegenerateAxis);
  CHECK_THROWS_AS(builtin_ellipse_family(TrigPolynomial({0.5, 1.0, 0.0}), TrigPolynomial::constant(1.0)),
                  DegenerateAxis);
}

TEST_CASE("rotated ellipse and ray radius") {
  const auto e = builtin_ellipse_family(TrigPolynomial::constant(2.0), TrigPolynomial::constant(1.0),
                                        TrigPolynomial::constant(kPi / 2));
  // Rotated by a quarter turn the long axis is vertical.
  CHECK(std::abs(e.rho(0.0, cplx(0, 2))) < 1e-14);
  CHECK(e.ray_radius(0.0, kPi / 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.ray_radius(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double psi : {0.3, 1.1, 4.0}) CHECK(std::abs(e.rho(0.5, std::polar(e.ray_radius(0.5, psi), psi))) < 1e-13);
}

TEST_CASE("wirtinger consistency on random samples") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CurveFamily> fams{
      builtin_circle_family(random_positive_trig(rng, 3, 1.0, 0.3), TrigPolynomial({0.1, 0.05, -0.02}),
                            TrigPolynomial({-0.05, 0.0, 0.03})),
      builtin_ellipse_family(TrigPolynomial({1.6, 0.2, 0.1}), TrigPolynomial({0.9, -0.1, 0.05}),
                             TrigPolynomial({0.3, 0.2, -0.1})),
  };
  const auto mult = BoundaryTrace::sample(BoundaryGrid(64), [](double t) {
    return 1.0 + 0.3 * std::polar(1.0, t);
  });
  fams.push_back(divisor_transform(fams[1], mult));
  fams.push_back(reflect_parameter(fams[1]));
  for (const auto& f : fams) {
    for (int s = 0; s < 25; ++s) {
      const double t = 2 * kPi * u(rng), psi = 2 * kPi * u(rng);
      const cplx w = std::polar(f.ray_radius(t, psi) * (0.9 + 0.2 * u(rng)), psi);
      const auto e = wirtinger_fd(f, t, w);
      CHECK(e.wbar < 1e-6);
      CHECK(e.w < 1e-6);
      CHECK(e.theta < 1e-6);
      CHECK(f.d_w(t, w) == std::conj(f.d_wbar(t, w)));
    }
  }
}

TEST_CASE("eta decomposition examples") {
  const int N = 64;
  {
    const auto tr = sample_on_circle(N, 1.0, [](cplx z) { return z; });
    const auto d = eta_decompose(unit_circle(), tr);
    for (int j = 0; j < N; ++j) {
      CHECK(std::abs(d.a[j]) < 1e-15);
      CHECK(std::abs(d.b[j]) < 1e-15);
    }
    CHECK(d.eta_winding == 0);
  }
  {
    const auto tr = sample_on_circle(N, 2.0, [](cplx z) { return z; });
    const auto d = eta_decompose(builtin_circle_family(TrigPolynomial::constant(2.0)), tr);
    for (int j = 0; j < N; ++j) {
      CHECK(std::abs(d.a[j] - std::log(4.0)) < 1e-14);
      CHECK(std::abs(d.b[j]) < 1e-15);
    }
  }
  {
    const auto e = ellipse21();
    const auto tr = ellipse_trace(N, 2.0, 1.0);
    const auto d = eta_decompose(e, tr);
    CHECK(d.eta_winding == 0);
    const auto eta = eta_values(e, tr);
    for (int j = 0; j < N; ++j) {
      // Oracle: eta from the closed-form gradient x/p^2 + i y/q^2.
      const cplx w = tr[j];
      const cplx direct = w * std::conj(cplx(w.real() / 4.0, w.imag()));
      CHECK(std::abs(eta[j] - direct) < 1e-15);
      CHECK(std::abs(std::exp(cplx(d.a[j].real(), d.b[j].real())) - direct) / std::abs(direct) < 1e-10);
    }
  }
}

TEST_CASE("eta round trip on random traces") {
  std::mt19937_64 rng(77);
  const auto e = builtin_ellipse_family(TrigPolynomial({1.8, 0.2, 0.0}), TrigPolynomial({1.0, 0.0, 0.1}),
                                        TrigPolynomial({0.0, 0.3, 0.0}));
  const int N = 128;
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_band_limited(rng, N, 4);
    const auto tr = BoundaryTrace::sample(BoundaryGrid(N), [&](double t) {
      const int j = static_cast<int>(std::lround(t * N / (2 * kPi))) % N;
      return std::polar(1.2 * std::exp(0.05 * u[j]), t);
    });
    const auto d = eta_decompose(e, tr);
    const auto eta = eta_values(e, tr);
    for (int j = 0; j < N; ++j)
      CHECK(std::abs(std::exp(cplx(d.a[j].real(), d.b[j].real())) - eta[j]) / std::abs(eta[j]) < 1e-10);
    // b_tilde is the conjugate function of b.
    const auto bt = hilbert_transform(d.b);
    for (int j = 0; j < N; ++j) CHECK(std::abs(bt[j] - d.b_tilde[j]) < 1e-14);
  }
}

TEST_CASE("eta decomposition failures") {
  const int N = 64;
  const auto c = builtin_circle_family(TrigPolynomial::constant(1.0), TrigPolynomial::constant(0.5));
  // The trace circles the centre but not the origin, so eta winds -1.
  const auto tr = BoundaryTrace::sample(BoundaryGrid(N), [](double t) { return 0.5 + 0.1 * std::polar(1.0, t); });
  try {
    eta_decompose(c, tr);
    FAIL("expected EtaWindingNonzero");
  } catch (const EtaWindingNonzero& e) {
    CHECK(e.winding() == -1);
  }
  std::vector<cplx> v(N, 1.0);
  v[5] = 0.0;
  CHECK_THROWS_AS(eta_decompose(unit_circle(), BoundaryTrace(BoundaryGrid(N), v)), ZeroOnTrace);
}

TEST_CASE("divisor transform examples") {
  const int N = 128;
  const auto base = unit_circle();
  {
    const auto one = BoundaryTrace(BoundaryGrid(N), std::vector<cplx>(N, 1.0));
    const auto f = divisor_transform(base, one);
    for (double t : {0.0, 1.3, 4.4})
      for (cplx w : {cplx(0.3, 0.2), cplx(1.1, -0.4)}) CHECK(std::abs(f.rho(t, w) - base.rho(t, w)) < 1e-15);
  }
  {
    const auto z = sample_on_circle(N, 1.0, [](cplx z) { return z; });
    const auto f = divisor_transform(base, z);
    for (double t : {0.0, 1.3, 4.4})
      for (cplx w : {cplx(0.3, 0.2), cplx(1.1, -0.4)})
        CHECK(std::abs(f.rho(t, w) - (std::norm(w) - 1.0)) < 1e-14);
  }
  {
    const auto g = sample_on_circle(N, 1.0, [](cplx z) { return 1.0 + z; });
    CHECK_THROWS_AS(divisor_transform(base, g), MultiplierVanishes);
  }
}

TEST_CASE("divisor transform places a zero") {
  const int N = 256;
  const auto g = sample_on_circle(N, 1.0, [](cplx z) { return z - 0.5; });
  const auto fam = divisor_transform(unit_circle(), g);
  DiscOptions opts;
  opts.grid = N;
  const auto s = solve_disc(fam, 0, opts);
  CHECK(s.residual_sup < 1e-10);
  std::vector<cplx> f(N);
  for (int j = 0; j < N; ++j) f[j] = g[j] * s.f_trace[j];
  const BoundaryTrace ft(BoundaryGrid(N), f);
  for (int j = 0; j < N; ++j) CHECK(std::abs(std::abs(f[j]) - 1.0) < 1e-10);
  std::vector<BoundaryTrace> tr{ft};
  const std::vector<cplx> pt{0.5};
  CHECK(std::abs(cauchy_extend(tr, Domain::disc(), pt)[0]) < 1e-10);
  const auto zs = locate_zeros(tr, Domain::disc());
  REQUIRE(zs.size() == 1);
  CHECK(std::abs(zs[0].position - 0.5) < 1e-8);
}

TEST_CASE("divisor transform by g and then 1/g") {
  std::mt19937_64 rng(13);
  const int N = 128;
  const auto fam = builtin_ellipse_family(TrigPolynomial({1.5, 0.2, 0.0}), TrigPolynomial({1.0, 0.0, 0.1}),
                                          TrigPolynomial({0.0, 0.2, 0.0}));
  for (int trial = 0; trial < 5; ++trial) {
    std::normal_distribution<double> nd;
    const cplx a(0.3 * nd(rng), 0.3 * nd(rng)), b(0.2 * nd(rng), 0.2 * nd(rng));
    const auto gf = [&](cplx z) { return 2.0 + a * z + b * z * z; };
    const auto g = sample_on_circle(N, 1.0, gf);
    const auto ginv = sample_on_circle(N, 1.0, [&](cplx z) { return 1.0 / gf(z); });
    const auto back = divisor_transform(divisor_transform(fam, g), ginv);
    const auto u = random_band_limited(rng, N, 3);
    std::vector<cplx> v(N);
    for (int j = 0; j < N; ++j) v[j] = std::polar(1.3 + 0.1 * u[j] / 3.0, 2 * kPi * j / N);
    const BoundaryTrace tr(BoundaryGrid(N), v);
    const auto r0 = fam.residual(tr), r1 = back.residual(tr);
    CHECK(sup_diff(r0, r1) < 1e-12);
  }
}

TEST_CASE("curvature floor check") {
  const int N = 256;
  {
    const auto r = curvature_floor_check(unit_circle(), sample_on_circle(N, 1.0, [](cplx z) { return z; }));
    CHECK(r.min_dbar == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.warnings.empty());
  }
  {
    const auto r = curvature_floor_check(builtin_circle_family(TrigPolynomial::constant(2.0)),
                                         sample_on_circle(N, 2.0, [](cplx z) { return z; }));
    CHECK(r.min_dbar == doctest::Approx(2.0).epsilon(1e-14));
  }
  {
    const auto r = curvature_floor_check(ellipse21(), ellipse_trace(N, 2.0, 1.0));
    // Oracle: dense sampling of |x/p^2 + i y/q^2| on the ellipse.
    double oracle = 1e9;
    for (int i = 0; i < 100000; ++i) {
      const double t = 2 * kPi * i / 100000;
      oracle = std::min(oracle, std::abs(cplx(2.0 * std::cos(t) / 4.0, std::sin(t))));
    }
    CHECK(r.min_dbar == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(r.min_dbar == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    const auto r = curvature_floor_check(unit_circle(), sample_on_circle(N, 1e-4, [](cplx z) { return z; }));
    CHECK_FALSE(r.warnings.empty());
  }
}

TEST_CASE("compositum growth bound") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int N = 128;
  const double alpha = 0.5;
  const std::vector<CurveFamily> fams{
      builtin_circle_family(TrigPolynomial({1.0, 0.2, 0.1})),
      builtin_ellipse_family(TrigPolynomial({1.5, 0.2, 0.0}), TrigPolynomial({1.0, 0.0, 0.1}),
                             TrigPolynomial({0.0, 0.2, 0.0})),
  };
  for (const auto& fam : fams) {
    for (int trial = 0; trial < 8; ++trial) {
      const int modes = 1 + trial % 4;
      std::vector<cplx> c(modes + 1);
      for (auto& z : c) z = std::polar(0.4 * u(rng), 2 * kPi * u(rng));
      std::vector<cplx> v(N);
      for (int j = 0; j < N; ++j) {
        const double t = 2 * kPi * j / N;
        for (int k = 0; k <= modes; ++k) v[j] += c[k] * std::polar(1.0, k * t);
      }
      const double fnorm = c1_alpha_norm(v, alpha);
      const double M = sampled_c2_norm(fam, fnorm);
      const BoundaryTrace tr(BoundaryGrid(N), v);
      const auto r = fam.residual(tr);
      std::vector<cplx> rc(r.begin(), r.end());
      CHECK(c1_alpha_norm(rc, alpha) <= 8.0 * (M + 1.0) * (fnorm * fnorm + 1.0));
    }
  }
}
