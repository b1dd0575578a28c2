#include "rhsolve/disc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rhsolve/errors.hpp"
#include "rhsolve/fft.hpp"

namespace rhsolve {

namespace {

std::vector<cplx> exp_trace(std::span<const cplx> g, int n) {
  const int N = static_cast<int>(g.size());
  std::vector<cplx> f(N);
  for (int j = 0; j < N; ++j)
    f[j] = std::polar(1.0, 2.0 * std::numbers::pi * double(n) * j / N) * std::exp(g[j]);
  return f;
}

}  // namespace

std::vector<cplx> log_step(const EtaDecomposition& d, std::span<const double> rhs) {
  const int N = static_cast<int>(rhs.size());
  std::vector<double> phi(N);
  for (int j = 0; j < N; ++j) phi[j] = std::exp(-d.a[j].real() - d.b_tilde[j].real()) * rhs[j];
  const std::vector<double> tphi = hilbert_transform(phi);
  std::vector<cplx> s(N);
  for (int j = 0; j < N; ++j)
    s[j] = 0.5 * std::exp(cplx(d.b_tilde[j].real(), -d.b[j].real())) * cplx(phi[j], tphi[j]);
  return s;
}

namespace {

Vec random_band_limited(std::mt19937_64& rng, int N, int degree) {
  std::normal_distribution<double> nd;
  std::vector<double> a(degree + 1), b(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    a[k] = nd(rng) / (1.0 + k);
    b[k] = nd(rng) / (1.0 + k);
  }
  Vec v(N);
  for (int j = 0; j < N; ++j) {
    const double t = 2.0 * std::numbers::pi * j / N;
    double s = a[0];
    for (int k = 1; k <= degree; ++k) s += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
    v[j] = s;
  }
  return v;
}

}  // namespace

std::vector<cplx> disc_modes_to_trace(const Vec& x) {
  const int N = static_cast<int>(x.size());
  std::vector<cplx> c(N, cplx{});
  for (int k = 0; k < N / 2; ++k) c[k] = cplx(x[2 * k], x[2 * k + 1]);
  return fft::backward(c);
}

Vec disc_trace_to_modes(std::span<const cplx> g) {
  const int N = static_cast<int>(g.size());
  const std::vector<cplx> c = fft::forward(g);
  Vec x(N);
  for (int k = 0; k < N / 2; ++k) {
    x[2 * k] = c[k].real() / N;
    x[2 * k + 1] = c[k].imag() / N;
  }
  return x;
}

LinearRHSystem make_linear_system(const CurveFamily& family, const BoundaryTrace& f,
                                  const BoundaryTrace& rhs) {
  std::vector<cplx> a(f.size());
  for (int j = 0; j < f.size(); ++j) a[j] = family.d_wbar(f.grid().node(j), f[j]);
  return {BoundaryTrace(f.grid(), std::move(a)), eta_decompose(family, f), rhs};
}

BoundaryTrace right_inverse_apply(const LinearRHSystem& sys, const BoundaryTrace& f,
                                  const BoundaryTrace& g_rhs) {
  if (!g_rhs.is_real(1e-12)) throw std::invalid_argument("right-hand side must be real");
  const std::vector<double> rhs = g_rhs.real_part();
  std::vector<cplx> h = log_step(sys.eta_dec, rhs);
  for (int j = 0; j < f.size(); ++j) h[j] *= f[j];
  return BoundaryTrace(f.grid(), std::move(h));
}

NewtonProblem disc_newton_problem(const CurveFamily& family, int n, int grid) {
  const BoundaryGrid bg(grid);
  NewtonProblem p;
  p.residual = [family, n, bg](const Vec& x) {
    const std::vector<cplx> f = exp_trace(disc_modes_to_trace(x), n);
    Vec r(f.size());
    for (int j = 0; j < bg.size(); ++j) r[j] = family.rho(bg.node(j), f[j]);
    return r;
  };
  p.right_inverse = [family, n, bg](const Vec& x, const Vec& rhs) {
    const BoundaryTrace f(bg, exp_trace(disc_modes_to_trace(x), n));
    const EtaDecomposition d = eta_decompose(family, f);
    return disc_trace_to_modes(log_step(d, rhs));
  };
  p.derivative = [family, n, bg](const Vec& x, const Vec& v) {
    const std::vector<cplx> f = exp_trace(disc_modes_to_trace(x), n);
    const std::vector<cplx> dg = disc_modes_to_trace(v);
    Vec r(f.size());
    for (int j = 0; j < bg.size(); ++j)
      r[j] = 2.0 * std::real(family.d_w(bg.node(j), f[j]) * f[j] * dg[j]);
    return r;
  };
  p.iterate_norm = [](const Vec& x) {
    double m = 0.0;
    for (const cplx& z : disc_modes_to_trace(x)) m = std::max(m, std::abs(z));
    return m;
  };
  p.residual_sampler = [grid](std::mt19937_64& rng) { return random_band_limited(rng, grid, 8); };
  p.iterate_sampler = [grid](std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vec x(grid, 0.0);
    for (int k = 0; k <= 8; ++k) {
      x[2 * k] = nd(rng) / (1.0 + k);
      x[2 * k + 1] = nd(rng) / (1.0 + k);
    }
    return x;
  };
  return p;
}

std::vector<cplx> disc_initial_guess(const CurveFamily& family, int n, int grid) {
  // Radial fit along the direction of the current guess: the first sweep uses
  // arg z^n, later sweeps the argument of the previous f. Exact for circles.
  const BoundaryGrid bg(grid);
  std::vector<double> u(grid), phase(grid, 0.0);
  std::vector<cplx> g(grid);
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int j = 0; j < grid; ++j) {
      const double t = bg.node(j);
      u[j] = std::log(family.ray_radius(t, n * t + phase[j]));
    }
    const std::vector<double> tu = hilbert_transform(u);
    for (int j = 0; j < grid; ++j) g[j] = cplx(u[j], tu[j]);
    phase = tu;
  }
  return g;
}

void align_gauge(DiscSolution& s) {
  const int N = s.g_trace.size();
  double mean = 0.0;
  for (const cplx& z : s.g_trace.values()) mean += z.imag();
  mean /= N;
  std::vector<cplx> g(s.g_trace.values().begin(), s.g_trace.values().end());
  for (cplx& z : g) z -= cplx(0.0, mean);
  s.f_trace = BoundaryTrace(s.g_trace.grid(), exp_trace(g, s.winding));
  s.g_trace = BoundaryTrace(s.g_trace.grid(), std::move(g));
}

double spectral_tail(std::span<const cplx> values) {
  const TrigCoefficients c = trig_coefficients(values);
  const int N = c.node_count();
  double all = 0.0, tail = 0.0;
  for (int k = c.min_mode(); k <= c.max_mode(); ++k) {
    all = std::max(all, std::abs(c(k)));
    if (k >= N / 4 && k < N / 2) tail = std::max(tail, std::abs(c(k)));
  }
  return tail / (1.0 + all);
}

HolderNormReport residual_holder_report(const BoundaryGrid& grid, std::span<const double> r) {
  constexpr int kMaxScan = 4096;
  const int stride = std::max(1, grid.size() / kMaxScan);
  if (stride == 1) return holder_norms(BoundaryTrace::from_real(grid, r), 0.5);
  const BoundaryGrid coarse(grid.size() / stride);
  std::vector<double> sub(coarse.size());
  for (int j = 0; j < coarse.size(); ++j) sub[j] = r[j * stride];
  HolderNormReport h = holder_norms(BoundaryTrace::from_real(coarse, sub), 0.5);
  h.sup_norm = sup_norm(Vec(r.begin(), r.end()));
  h.c1_alpha = std::max(h.c1_alpha, h.sup_norm);
  return h;
}

DiscSolution solve_disc(const CurveFamily& family, int n, const DiscOptions& opts) {
  if (n < 0) throw std::invalid_argument("winding number must be nonnegative");
  if (opts.initial_g && static_cast<int>(opts.initial_g->size()) != opts.grid)
    throw std::invalid_argument("initial guess does not match the grid");
  const int max_grid = std::max(opts.grid, opts.max_grid);
  constexpr double kResolved = 1e-11;

  for (int N = opts.grid, refinements = 0;; N *= 2, ++refinements) {
    const BoundaryGrid bg(N);
    const bool last = 2 * N > max_grid;
    const std::vector<cplx> g0 = opts.initial_g ? trig_resample(*opts.initial_g, N)
                                                : disc_initial_guess(family, n, N);
    const NewtonProblem problem = disc_newton_problem(family, n, N);
    IterateOptions it;
    it.tol = opts.tol;
    it.max_iter = opts.max_iter;
    it.max_halvings = opts.max_halvings;
    it.compute_certificate = opts.certify;
    it.certify = opts.certify_options;
    IterateResult res;
    try {
      res = iterate(problem, disc_trace_to_modes(g0), it);
    } catch (const NoConvergence&) {
      if (last) throw;
      continue;
    }
    const std::vector<cplx> g = disc_modes_to_trace(res.x);
    if (!last && spectral_tail(g) > kResolved) continue;

    DiscSolution s{n, BoundaryTrace(bg, g), BoundaryTrace(bg, exp_trace(g, n)), 0.0, {},
                   res.history, res.iterations, res.damped, std::nullopt, refinements};
    if (opts.certify) s.certificate = res.certificate;
    const std::vector<double> r = family.residual(s.f_trace);
    s.residual_sup = sup_norm(r);
    s.residual_holder = residual_holder_report(bg, r);
    return s;
  }
}

DiscSolution solve_disc_circle_closed_form(const TrigPolynomial& radius, int n, int grid) {
  if (radius.sampled_min() <= 0.0) throw std::invalid_argument("radius must be positive");
  const BoundaryGrid bg(grid);
  std::vector<double> u(grid);
  for (int j = 0; j < grid; ++j) u[j] = std::log(radius(bg.node(j)));
  const std::vector<double> tu = hilbert_transform(u);
  std::vector<cplx> g(grid);
  for (int j = 0; j < grid; ++j) g[j] = cplx(u[j], tu[j]);
  DiscSolution s{n, BoundaryTrace(bg, g), BoundaryTrace(bg, exp_trace(g, n)), 0.0, {}, {0.0}, 0,
                 false, std::nullopt, 0};
  align_gauge(s);
  std::vector<double> r(grid);
  for (int j = 0; j < grid; ++j) {
    const double R = radius(bg.node(j));
    r[j] = std::norm(s.f_trace[j]) - R * R;
  }
  s.residual_sup = sup_norm(r);
  s.newton_history = {s.residual_sup};
  s.residual_holder = residual_holder_report(bg, r);
  return s;
}

StepDiagnostics newton_step_diagnostics(const CurveFamily& family, const BoundaryTrace& f,
                                        double damping) {
  const std::vector<double> r = family.residual(f);
  const BoundaryTrace rt = BoundaryTrace::from_real(f.grid(), r);
  const LinearRHSystem sys = make_linear_system(family, f, rt);
  const BoundaryTrace h = right_inverse_apply(sys, f, rt);
  std::vector<cplx> fn(f.size());
  double step = 0.0, predicted = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    const cplx dh = damping * h[j];
    step = std::max(step, std::abs(dh));
    fn[j] = f[j] - dh;
    const double lin = r[j] - 2.0 * std::real(family.d_w(f.grid().node(j), f[j]) * dh);
    predicted = std::max(predicted, std::abs(lin));
  }
  StepDiagnostics d;
  d.step_norm = step;
  d.predicted_residual = predicted;
  d.actual_residual = family.residual_sup(BoundaryTrace(f.grid(), std::move(fn)));
  return d;
}

double differentiated_residual(const CurveFamily& family, const DiscSolution& s) {
  const std::vector<cplx> dg = spectral_derivative(s.g_trace.values());
  double m = 0.0;
  for (int j = 0; j < s.f_trace.size(); ++j) {
    const double t = s.f_trace.grid().node(j);
    const cplx f = s.f_trace[j];
    const cplx df = f * (cplx(0.0, s.winding) + dg[j]);
    m = std::max(m, std::abs(family.d_theta(t, f) + 2.0 * std::real(family.d_w(t, f) * df)));
  }
  return m;
}

double convergence_order(const std::vector<double>& history, double floor) {
  std::vector<double> h;
  for (double r : history)
    if (r > floor) h.push_back(r);
  if (h.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const double r1 = h[h.size() - 3], r2 = h[h.size() - 2], r3 = h[h.size() - 1];
  return std::log(r3 / r2) / std::log(r2 / r1);
}

}  // namespace rhsolve
