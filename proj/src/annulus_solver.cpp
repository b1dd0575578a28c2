#include "rhsolve/annulus_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rhsolve/errors.hpp"
#include "rhsolve/fft.hpp"

namespace rhsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> modes_of(std::span<const cplx> v) {
  std::vector<cplx> c = fft::forward(v);
  for (cplx& x : c) x /= double(v.size());
  return c;
}

std::vector<cplx> nonnegative_modes(std::span<const cplx> v) {
  std::vector<cplx> c = modes_of(v);
  c.resize(v.size() / 2);
  return c;
}

std::vector<cplx> as_complex(std::span<const double> v) { return {v.begin(), v.end()}; }

double sup_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& c : v) m = std::max(m, std::abs(c));
  return m;
}

// phi_m(r) = chi'(r)/2 A_{m-1} r^{m-1}: d-bar of chi(|z|) sum A_k z^k.
ModalDensity outer_density(const RadialCutoff& chi, std::vector<cplx> A, int M) {
  return [chi, A = std::move(A), M](double r) {
    std::vector<cplx> c(M, 0.0);
    const double d = 0.5 * chi.derivative(r);
    if (d == 0.0) return c;
    const int top = std::min<int>(M / 2, static_cast<int>(A.size()));
    double pw = d;
    for (int m = 1; m <= top; ++m) {
      c[m] = pw * A[m - 1];
      pw *= r;
    }
    return c;
  };
}

// phi_m(r) = chi'(r)/2 C_k (q/r)^k with m = 1 - k: d-bar of chi(|z|) sum C_k (q/z)^k.
ModalDensity inner_density(const RadialCutoff& chi, std::vector<cplx> C, double q, int M) {
  return [chi, C = std::move(C), q, M](double r) {
    std::vector<cplx> c(M, 0.0);
    const double d = 0.5 * chi.derivative(r);
    if (d == 0.0) return c;
    const int top = std::min<int>(M / 2, static_cast<int>(C.size()));
    double pw = d;
    for (int k = 0; k < top; ++k) {
      c[(1 - k + M) % M] = pw * C[k];
      pw *= q / r;
    }
    return c;
  };
}

std::vector<cplx> add(std::vector<cplx> a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

// Values on |z| = 1 of sum_k c_k z^k, or on |z| = q of sum_k c_k (q/z)^k.
std::vector<cplx> power_trace(const std::vector<cplx>& c, int N, bool reflected) {
  std::vector<cplx> s(N, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) s[reflected ? (N - int(k)) % N : int(k)] += c[k];
  return fft::backward(s);
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * z + *it;
  return s;
}

Vec band_limited_pair(std::mt19937_64& rng, int N, int degree) {
  std::normal_distribution<double> nd;
  Vec v(2 * N, 0.0);
  for (int part = 0; part < 2; ++part) {
    std::vector<double> a(degree + 1), b(degree + 1);
    for (int k = 0; k <= degree; ++k) {
      a[k] = nd(rng) / (1.0 + k);
      b[k] = nd(rng) / (1.0 + k);
    }
    for (int j = 0; j < N; ++j) {
      const double t = kTwoPi * j / N;
      double s = a[0];
      for (int k = 1; k <= degree; ++k) s += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
      v[part * N + j] = s;
    }
  }
  return v;
}

double holder_pair_norm(const Vec& r, double alpha) {
  const int N = static_cast<int>(r.size() / 2);
  double m = 0.0;
  for (int part = 0; part < 2; ++part) {
    const std::vector<cplx> v(r.begin() + part * N, r.begin() + (part + 1) * N);
    m = std::max(m, sup_abs(v) + holder_seminorm(v, alpha));
  }
  return m;
}

}  // namespace

AnnulusDomain::AnnulusDomain(double q_, double outer_exponent, double inner_exponent)
    : q(q_), s0(std::pow(q_, outer_exponent)), s1(std::pow(q_, inner_exponent)) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("annulus modulus must lie in (0, 1)");
  if (!(q < s1 && s1 < s0 && s0 < 1.0))
    throw std::invalid_argument("collar radii must satisfy q < s1 < s0 < 1");
  chi0 = RadialCutoff{s0, std::sqrt(s0), true};
  chi1 = RadialCutoff{std::sqrt(q * s1), s1, false};
}

PompeiuOperator AnnulusDomain::band_operator(int component, int modes, int panels) const {
  const RadialCutoff& c = component == 0 ? chi0 : chi1;
  return PompeiuOperator(c.a, c.b, modes, panels);
}

LaurentSeries LaurentSeries::from_traces(std::span<const cplx> gamma0, std::span<const cplx> gamma1,
                                         double q) {
  if (gamma0.size() != gamma1.size()) throw std::invalid_argument("trace sizes differ");
  const int N = static_cast<int>(gamma0.size());
  const std::vector<cplx> c0 = modes_of(gamma0), c1 = modes_of(gamma1);
  LaurentSeries s;
  s.q = q;
  s.outer.assign(c0.begin(), c0.begin() + N / 2);
  s.inner.resize(N / 2 - 1);
  for (int k = 1; k < N / 2; ++k) s.inner[k - 1] = c1[N - k];
  return s;
}

std::vector<cplx> LaurentSeries::outer_trace() const {
  const int N = node_count();
  std::vector<cplx> s(N, 0.0);
  double qk = q;
  for (int k = 0; k < N / 2; ++k) s[k] = outer[k];
  for (int k = 1; k < N / 2; ++k, qk *= q) s[N - k] = inner[k - 1] * qk;
  return fft::backward(s);
}

std::vector<cplx> LaurentSeries::inner_trace() const {
  const int N = node_count();
  std::vector<cplx> s(N, 0.0);
  double qk = 1.0;
  for (int k = 0; k < N / 2; ++k, qk *= q) s[k] = outer[k] * qk;
  for (int k = 1; k < N / 2; ++k) s[N - k] = inner[k - 1];
  return fft::backward(s);
}

cplx LaurentSeries::value(cplx z) const {
  cplx b = 0.0;
  const cplx w = q / z;
  for (auto it = inner.rbegin(); it != inner.rend(); ++it) b = (b + *it) * w;
  return horner(outer, z) + b;
}

double LaurentHarmonic::value(cplx z) const {
  return std::real(holomorphic.value(z)) + c_log * std::log(std::abs(z));
}

LaurentHarmonic harmonic_extend_annulus(std::span<const double> gamma0,
                                        std::span<const double> gamma1, double q) {
  if (gamma0.size() != gamma1.size()) throw std::invalid_argument("data sizes differ");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("annulus modulus must lie in (0, 1)");
  const int N = static_cast<int>(gamma0.size());
  const std::vector<cplx> c0 = modes_of(as_complex(gamma0)), c1 = modes_of(as_complex(gamma1));
  LaurentHarmonic h;
  h.q = q;
  h.c_log = (c1[0].real() - c0[0].real()) / std::log(q);
  h.holomorphic.q = q;
  h.holomorphic.outer.assign(N / 2, 0.0);
  h.holomorphic.inner.assign(N / 2 - 1, 0.0);
  h.holomorphic.outer[0] = c0[0].real();
  double qk = 1.0;
  for (int k = 1; k < N / 2; ++k) {
    qk *= q;
    if (qk < std::numeric_limits<double>::min()) {
      qk = 0.0;
      ++h.capped_modes;
    }
    const double det = 1.0 - qk * qk;
    const cplx a = (c0[k] - qk * c1[k]) / det;
    const cplx bp = (c1[k] - qk * c0[k]) / det;
    h.holomorphic.outer[k] = 2.0 * a;
    h.holomorphic.inner[k - 1] = 2.0 * std::conj(bp);
  }
  return h;
}

AnnulusWindings annulus_windings(const BoundaryTrace& gamma0, const BoundaryTrace& gamma1) {
  AnnulusWindings w;
  w.gamma0 = winding_number(gamma0);
  w.gamma1_disc = winding_number(gamma1);
  w.gamma1_coherent = -w.gamma1_disc;
  return w;
}

int AnnulusSolution::zero_count() const {
  int c = 0;
  for (const LocatedZero& z : zeros) c += z.multiplicity;
  return c;
}

GlueResult glue_construct(const CurveFamily& family0, const CurveFamily& family1, int n0, int n1,
                          double q, const GlueOptions& opts) {
  const AnnulusDomain dom(q);
  const double decay = std::max(std::pow(dom.s0, n0), std::pow(q / dom.s1, n1));
  if (decay >= opts.glue_threshold)
    throw GlueTooCoarse("collar decay " + std::to_string(decay) + " not below the glue threshold",
                        decay);

  DiscSolution c0 = solve_disc(family0, n0, opts.disc);
  DiscSolution c1 = solve_disc(reflect_parameter(family1), n1, opts.disc);
  const int N = std::max(c0.f_trace.size(), c1.f_trace.size());
  const std::vector<cplx> A = nonnegative_modes(trig_resample(c0.f_trace.values(), N));
  const std::vector<cplx> C = nonnegative_modes(trig_resample(c1.f_trace.values(), N));

  const PompeiuOperator op0 = dom.band_operator(0, N, opts.panels);
  const PompeiuOperator op1 = dom.band_operator(1, N, opts.panels);
  const ModalDensity d0 = outer_density(dom.chi0, A, N);
  const ModalDensity d1 = inner_density(dom.chi1, C, q, N);
  const std::vector<cplx> u0 = add(op0.on_circle(d0, 1.0, N), op1.on_circle(d1, 1.0, N));
  const std::vector<cplx> u1 = add(op0.on_circle(d0, q, N), op1.on_circle(d1, q, N));

  // chi0 = 1, chi1 = 0 on |z| = 1 and the reverse on |z| = q.
  std::vector<cplx> h0 = power_trace(A, N, false), h1 = power_trace(C, N, true);
  for (int j = 0; j < N; ++j) {
    h0[j] -= u0[j];
    h1[j] -= u1[j];
  }
  const BoundaryGrid grid(N);
  GlueResult g{dom,
               BoundaryTrace(grid, std::move(h0)),
               BoundaryTrace(grid, std::move(h1)),
               {},
               std::move(c0),
               std::move(c1),
               A,
               C};
  g.report.n0 = n0;
  g.report.n1 = n1;
  g.report.grid = N;
  g.report.pre_newton_residual =
      std::max(family0.residual_sup(g.gamma0), family1.residual_sup(g.gamma1));
  g.report.dbar_norm = std::max(sup_abs(u0), sup_abs(u1));
  g.report.collar_norm = std::max(c1_alpha_norm(g.collar0.f_trace.values(), 0.5),
                                  c1_alpha_norm(g.collar1.f_trace.values(), 0.5));
  if (!(g.report.pre_newton_residual <= opts.newton_basin_bound))
    throw GlueTooCoarse("pre-Newton residual " + std::to_string(g.report.pre_newton_residual) +
                            " exceeds the Newton basin bound",
                        g.report.pre_newton_residual);
  return g;
}

cplx GlueResult::direct_value(cplx z) const {
  const int N = static_cast<int>(2 * outer_modes.size());
  const double r = std::abs(z);
  const PompeiuOperator op0 = domain.band_operator(0, N), op1 = domain.band_operator(1, N);
  const cplx f = domain.chi0.value(r) * horner(outer_modes, z) +
                 domain.chi1.value(r) * horner(inner_modes, domain.q / z);
  return f - op0.at(outer_density(domain.chi0, outer_modes, N), z) -
         op1.at(inner_density(domain.chi1, inner_modes, domain.q, N), z);
}

Vec laurent_to_vec(const LaurentSeries& s) {
  Vec x;
  x.reserve(2 * (s.outer.size() + s.inner.size()));
  for (const cplx& c : s.outer) {
    x.push_back(c.real());
    x.push_back(c.imag());
  }
  for (const cplx& c : s.inner) {
    x.push_back(c.real());
    x.push_back(c.imag());
  }
  return x;
}

LaurentSeries vec_to_laurent(const Vec& x, double q) {
  const std::size_t K = (x.size() + 2) / 4;
  if (4 * K - 2 != x.size()) throw std::invalid_argument("amplitude vector has the wrong length");
  LaurentSeries s;
  s.q = q;
  s.outer.resize(K);
  s.inner.resize(K - 1);
  for (std::size_t k = 0; k < K; ++k) s.outer[k] = {x[2 * k], x[2 * k + 1]};
  for (std::size_t k = 0; k + 1 < K; ++k) s.inner[k] = {x[2 * K + 2 * k], x[2 * K + 2 * k + 1]};
  return s;
}

namespace {

struct AnnulusContext {
  CurveFamily f0, f1;
  double q;
  int N;
  BoundaryGrid grid;
  AnnulusDomain dom;
  PompeiuOperator op0, op1;
  std::vector<cplx> P0;   // outer collar solution on |z| = 1
  std::vector<cplx> P1;   // reflected inner collar solution on |zeta| = 1
  AnnulusOptions opts;
  std::shared_ptr<bool> fallback;

  std::pair<std::vector<cplx>, std::vector<cplx>> traces(const Vec& x) const {
    const LaurentSeries s = vec_to_laurent(x, q);
    return {s.outer_trace(), s.inner_trace()};
  }

  Vec residual(const Vec& x) const {
    const auto [o, i] = traces(x);
    Vec r(2 * N);
    for (int j = 0; j < N; ++j) {
      r[j] = f0.rho(grid.node(j), o[j]);
      r[N + j] = f1.rho(grid.node(j), i[j]);
    }
    return r;
  }

  Vec derivative(const Vec& x, const Vec& v) const {
    const auto [o, i] = traces(x);
    const auto [vo, vi] = traces(v);
    Vec r(2 * N);
    for (int j = 0; j < N; ++j) {
      r[j] = 2.0 * std::real(f0.d_w(grid.node(j), o[j]) * vo[j]);
      r[N + j] = 2.0 * std::real(f1.d_w(grid.node(j), i[j]) * vi[j]);
    }
    return r;
  }

  // eta = P conj(d_wbar rho(theta, F)) on |z| = 1 and, in the zeta
  // parametrisation, on |z| = q.
  std::pair<EtaDecomposition, EtaDecomposition> decompositions(const Vec& x) const {
    const auto [o, i] = traces(x);
    std::vector<cplx> e0(N), e1(N);
    for (int j = 0; j < N; ++j) {
      e0[j] = P0[j] * std::conj(f0.d_wbar(grid.node(j), o[j]));
      const int jz = (N - j) % N;
      e1[jz] = P1[jz] * std::conj(f1.d_wbar(grid.node(j), i[j]));
    }
    return {eta_decompose_values(grid, e0), eta_decompose_values(grid, e1)};
  }

  // H - T0(dbar H) with H = chi0 H0 + chi1 H1, returned as amplitudes.
  Vec bhat(const std::pair<EtaDecomposition, EtaDecomposition>& d, const Vec& g) const {
    const std::span<const double> g0(g.data(), N);
    std::vector<double> g1(N);
    for (int jz = 0; jz < N; ++jz) g1[jz] = g[N + (N - jz) % N];
    std::vector<cplx> H0 = log_step(d.first, g0), H1 = log_step(d.second, g1);
    for (int j = 0; j < N; ++j) {
      H0[j] *= P0[j];
      H1[j] *= P1[j];
    }
    const std::vector<cplx> A = nonnegative_modes(H0), D = nonnegative_modes(H1);
    const ModalDensity d0 = outer_density(dom.chi0, A, N);
    const ModalDensity d1 = inner_density(dom.chi1, D, q, N);
    std::vector<cplx> t0 = power_trace(A, N, false), t1 = power_trace(D, N, true);
    const std::vector<cplx> u0 = add(op0.on_circle(d0, 1.0, N), op1.on_circle(d1, 1.0, N));
    const std::vector<cplx> u1 = add(op0.on_circle(d0, q, N), op1.on_circle(d1, q, N));
    for (int j = 0; j < N; ++j) {
      t0[j] -= u0[j];
      t1[j] -= u1[j];
    }
    return laurent_to_vec(LaurentSeries::from_traces(t0, t1, q));
  }

  // Sum of E^k g with E = I - DA(x) Bhat, stopped on a small term; throws
  // NeumannDiverges when the terms stop contracting.
  Vec neumann(const Vec& x, const std::pair<EtaDecomposition, EtaDecomposition>& d,
              const Vec& g) const {
    const double gn = sup_norm(g);
    Vec y = g, term = g;
    double prev = gn;
    for (int t = 1;; ++t) {
      const Vec dt = derivative(x, bhat(d, term));
      for (std::size_t i = 0; i < term.size(); ++i) term[i] -= dt[i];
      const double tn = sup_norm(term);
      if (tn <= std::max(1e-13 * gn, 1e-15)) break;
      if (tn > opts.neumann_ratio * prev)
        throw NeumannDiverges("Neumann term ratio " + std::to_string(tn / prev) + " above bound");
      if (t >= opts.neumann_terms) throw NeumannDiverges("Neumann series did not settle");
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += term[i];
      prev = tn;
    }
    return y;
  }

  // Tikhonov-regularised least squares over all grid-resolved amplitudes.
  // Freezing any of them leaves a residual floor at their glue-time values.
  Vec least_squares(const Vec& x, const Vec& g) const {
    const int K = N / 2, Kt = K - 1;
    std::vector<int> cols;
    for (int k = 0; k <= Kt; ++k) {
      cols.push_back(2 * k);
      cols.push_back(2 * k + 1);
    }
    for (int k = 1; k <= Kt; ++k) {
      cols.push_back(2 * K + 2 * (k - 1));
      cols.push_back(2 * K + 2 * (k - 1) + 1);
    }
    const int n = static_cast<int>(cols.size());
    Eigen::MatrixXd M(2 * N + n, n);
    M.setZero();
    double scale = 0.0;
    Vec e(4 * K - 2, 0.0);
    for (int c = 0; c < n; ++c) {
      e[cols[c]] = 1.0;
      const Vec col = derivative(x, e);
      e[cols[c]] = 0.0;
      for (int r = 0; r < 2 * N; ++r) M(r, c) = col[r];
      scale = std::max(scale, M.col(c).norm());
    }
    const double lambda = 1e-7 * scale;
    for (int c = 0; c < n; ++c) M(2 * N + c, c) = lambda;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * N + n);
    for (int r = 0; r < 2 * N; ++r) rhs(r) = g[r];
    const Eigen::VectorXd sol = M.householderQr().solve(rhs);
    Vec out(4 * K - 2, 0.0);
    for (int c = 0; c < n; ++c) out[cols[c]] = sol(c);
    return out;
  }

  Vec right_inverse(const Vec& x, const Vec& g) const {
    if (!opts.force_fallback) {
      try {
        const auto d = decompositions(x);
        return bhat(d, neumann(x, d, g));
      } catch (const NeumannDiverges&) {
      }
    }
    if (fallback) *fallback = true;
    return least_squares(x, g);
  }
};

}  // namespace

NewtonProblem annulus_newton_problem(const CurveFamily& family0, const CurveFamily& family1,
                                     const GlueResult& glue, const AnnulusOptions& opts,
                                     std::shared_ptr<bool> fallback_used) {
  const int N = glue.report.grid;
  const double q = glue.domain.q;
  auto ctx = std::make_shared<const AnnulusContext>(AnnulusContext{
      family0, family1, q, N, BoundaryGrid(N), glue.domain,
      glue.domain.band_operator(0, N, opts.glue.panels),
      glue.domain.band_operator(1, N, opts.glue.panels), power_trace(glue.outer_modes, N, false),
      power_trace(glue.inner_modes, N, false), opts, std::move(fallback_used)});

  NewtonProblem p;
  p.residual = [ctx](const Vec& x) { return ctx->residual(x); };
  p.derivative = [ctx](const Vec& x, const Vec& v) { return ctx->derivative(x, v); };
  p.right_inverse = [ctx](const Vec& x, const Vec& g) { return ctx->right_inverse(x, g); };
  p.iterate_norm = [ctx](const Vec& x) {
    const auto [o, i] = ctx->traces(x);
    return std::max(sup_abs(o), sup_abs(i));
  };
  p.residual_sampler = [N](std::mt19937_64& rng) { return band_limited_pair(rng, N, 8); };
  p.iterate_sampler = [N](std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vec v(2 * N - 2, 0.0);
    for (int k = 0; k <= 8; ++k) {
      v[2 * k] = nd(rng) / (1.0 + k);
      v[2 * k + 1] = nd(rng) / (1.0 + k);
      if (k >= 1) {
        v[N + 2 * (k - 1)] = nd(rng) / (1.0 + k);
        v[N + 2 * (k - 1) + 1] = nd(rng) / (1.0 + k);
      }
    }
    return v;
  };
  return p;
}

AnnulusSolution solve_annulus(const CurveFamily& family0, const CurveFamily& family1, int n0,
                              int n1, double q, const AnnulusOptions& opts) {
  const GlueResult glue = glue_construct(family0, family1, n0, n1, q, opts.glue);
  auto fallback = std::make_shared<bool>(false);
  const NewtonProblem p = annulus_newton_problem(family0, family1, glue, opts, fallback);
  const Vec x0 = laurent_to_vec(LaurentSeries::from_traces(glue.gamma0.values(), glue.gamma1.values(), q));

  AnnulusSolution s;
  s.q = q;
  s.glue = glue.report;
  std::optional<NewtonCertificate> cert;
  if (opts.certify) {
    NewtonProblem pc = p;
    const double alpha = opts.holder_alpha;
    pc.residual_norm = [alpha](const Vec& r) { return holder_pair_norm(r, alpha); };
    cert = certify(pc, x0, opts.certify_options);
  }
  IterateOptions io;
  io.tol = opts.tol;
  io.max_iter = opts.max_iter;
  io.max_halvings = opts.max_halvings;
  const IterateResult res = iterate(p, x0, io);

  const LaurentSeries sol = vec_to_laurent(res.x, q);
  const BoundaryGrid grid(glue.report.grid);
  s.gamma0 = BoundaryTrace(grid, sol.outer_trace());
  s.gamma1 = BoundaryTrace(grid, sol.inner_trace());
  s.windings = annulus_windings(s.gamma0, s.gamma1);
  s.residual_gamma0 = family0.residual_sup(s.gamma0);
  s.residual_gamma1 = family1.residual_sup(s.gamma1);
  s.newton_history = res.history;
  s.iterations = res.iterations;
  s.damped = res.damped;
  if (cert) {
    cert->applicable = !res.damped;
    cert->fallback = *fallback;
    s.certificate = cert;
  }
  const BoundaryTrace both[] = {s.gamma0, s.gamma1};
  s.zeros = locate_zeros(both, Domain::annulus(q), opts.zeros);
  return s;
}

RadialConstruction annulus_radial_from_zeros(const TrigPolynomial& r0, const TrigPolynomial& r1,
                                             double q, int k1, const std::vector<cplx>& zeros,
                                             int grid) {
  // Resolve log|z - z_j| on both circles: its modes decay like the larger of
  // |z_j| and q/|z_j|.
  int N = grid;
  for (const cplx& z : zeros) {
    const double ratio = std::max(std::abs(z), q / std::abs(z));
    if (!(ratio < 1.0)) throw std::invalid_argument("zero not inside the annulus");
    const double need = 2.0 * std::log(1e-17) / std::log(ratio);
    while (N < need && N < (1 << 16)) N *= 2;
  }
  const BoundaryGrid bg(N);
  std::vector<double> l0(N), l1(N), d0(N), d1(N);
  for (int j = 0; j < N; ++j) {
    const double t = bg.node(j);
    const cplx e = std::polar(1.0, t);
    l0[j] = std::log(r0(t));
    l1[j] = std::log(r1(t));
    d0[j] = l0[j];
    d1[j] = l1[j] - k1 * std::log(q);
    for (const cplx& z : zeros) {
      d0[j] -= std::log(std::abs(e - z));
      d1[j] -= std::log(std::abs(q * e - z));
    }
  }
  RadialConstruction rc;
  rc.s = harmonic_extend_annulus(l0, l1, q).c_log;
  rc.k1 = k1;
  const LaurentHarmonic F = harmonic_extend_annulus(d0, d1, q);
  rc.log_mismatch = F.c_log;
  const std::vector<cplx> fo = F.holomorphic.outer_trace(), fi = F.holomorphic.inner_trace();
  std::vector<cplx> g0(N), g1(N);
  for (int j = 0; j < N; ++j) {
    const double t = bg.node(j);
    const cplx e = std::polar(1.0, t);
    cplx a = std::exp(fo[j]) * std::polar(1.0, k1 * t);
    cplx b = std::exp(fi[j]) * std::polar(std::pow(q, k1), k1 * t);
    for (const cplx& z : zeros) {
      a *= e - z;
      b *= q * e - z;
    }
    g0[j] = a;
    g1[j] = b;
  }
  AnnulusSolution& s = rc.solution;
  s.q = q;
  s.gamma0 = BoundaryTrace(bg, std::move(g0));
  s.gamma1 = BoundaryTrace(bg, std::move(g1));
  s.windings = annulus_windings(s.gamma0, s.gamma1);
  for (int j = 0; j < N; ++j) {
    const double t = bg.node(j);
    s.residual_gamma0 = std::max(s.residual_gamma0, std::abs(std::abs(s.gamma0[j]) - r0(t)));
    s.residual_gamma1 = std::max(s.residual_gamma1, std::abs(std::abs(s.gamma1[j]) - r1(t)));
  }
  const BoundaryTrace both[] = {s.gamma0, s.gamma1};
  s.zeros = locate_zeros(both, Domain::annulus(q));
  return rc;
}

AnnulusSolution solve_annulus_radial(const TrigPolynomial& r0, const TrigPolynomial& r1, double q,
                                     double psi, int grid) {
  if (!(r0.sampled_min() > 0.0 && r1.sampled_min() > 0.0))
    throw std::invalid_argument("radii must be positive");
  const BoundaryGrid bg(grid);
  std::vector<double> l0(grid), l1(grid);
  for (int j = 0; j < grid; ++j) {
    l0[j] = std::log(r0(bg.node(j)));
    l1[j] = std::log(r1(bg.node(j)));
  }
  const double s = harmonic_extend_annulus(l0, l1, q).c_log;
  int k1 = static_cast<int>(std::floor(s));
  double t = s - k1;
  if (t < 1e-12) t = 0.0;
  if (t > 1.0 - 1e-12) {
    t = 0.0;
    ++k1;
  }
  std::vector<cplx> zeros;
  if (t > 0.0) zeros.push_back(std::polar(std::pow(q, t), psi));
  return annulus_radial_from_zeros(r0, r1, q, k1, zeros, grid).solution;
}

double aligned_difference(const AnnulusSolution& f, const AnnulusSolution& g) {
  const int N = std::max(f.gamma0.size(), g.gamma0.size());
  const std::vector<cplx> f0 = trig_resample(f.gamma0.values(), N),
                          f1 = trig_resample(f.gamma1.values(), N),
                          g0 = trig_resample(g.gamma0.values(), N),
                          g1 = trig_resample(g.gamma1.values(), N);
  cplx c = 0.0;
  for (int j = 0; j < N; ++j) c += f0[j] * std::conj(g0[j]) + f1[j] * std::conj(g1[j]);
  c = std::abs(c) > 0.0 ? c / std::abs(c) : 1.0;
  double d = 0.0;
  for (int j = 0; j < N; ++j)
    d = std::max({d, std::abs(f0[j] - c * g0[j]), std::abs(f1[j] - c * g1[j])});
  return d;
}

}  // namespace rhsolve
