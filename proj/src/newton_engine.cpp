#include "rhsolve/newton_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include "rhsolve/errors.hpp"

namespace rhsolve {

namespace {

Vec axpy(const Vec& x, double a, const Vec& y) {
  Vec r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * y[i];
  return r;
}

Vec diff(const Vec& x, const Vec& y) { return axpy(x, -1.0, y); }

Vec gaussian(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (double& c : v) c = nd(rng);
  return v;
}

struct Norms {
  std::function<double(const Vec&)> x, r;
};

Norms norms_of(const NewtonProblem& p) {
  return {p.iterate_norm ? p.iterate_norm : sup_norm, p.residual_norm ? p.residual_norm : sup_norm};
}

Vec apply_derivative(const NewtonProblem& p, const Vec& x, const Vec& v, double h) {
  if (p.derivative) return p.derivative(x, v);
  const Vec plus = p.residual(axpy(x, h, v));
  const Vec minus = p.residual(axpy(x, -h, v));
  Vec d(plus.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (plus[i] - minus[i]) / (2.0 * h);
  return d;
}

}  // namespace

double sup_norm(const Vec& v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

NewtonCertificate make_certificate(double omega1, double omega2, double omega3,
                                   std::string method) {
  NewtonCertificate c;
  c.omega1 = omega1;
  c.omega2 = omega2;
  c.omega3 = omega3;
  c.product = 4.0 * omega1 * (omega1 + 1.0) * (omega2 + 1.0) * omega3;
  c.certified = c.product < 1.0;
  c.method = std::move(method);
  return c;
}

NewtonCertificate certify(const NewtonProblem& p, const Vec& x0, const CertifyOptions& opts) {
  const Norms nrm = norms_of(p);
  std::mt19937_64 rng(opts.seed);
  try {
    const Vec a0 = p.residual(x0);
    const double w3 = nrm.r(a0);

    double w1 = 0.0;
    for (int i = 0; i < opts.directions; ++i) {
      const Vec g = p.residual_sampler ? p.residual_sampler(rng) : gaussian(rng, a0.size());
      const double gn = nrm.r(g);
      if (gn == 0.0) continue;
      w1 = std::max(w1, nrm.x(p.right_inverse(x0, g)) / gn);
    }

    const double radius =
        opts.radius > 0.0 ? opts.radius : std::max(4.0 * w1 * w3, 1e-3 * (1.0 + nrm.x(x0)));
    auto unit = [&](Vec v) {
      const double n = nrm.x(v);
      for (double& c : v) c /= n;
      return v;
    };
    auto draw = [&] { return p.iterate_sampler ? p.iterate_sampler(rng) : gaussian(rng, x0.size()); };
    double w2 = 0.0;
    for (int i = 0; i < opts.pairs; ++i) {
      const Vec x1 = axpy(x0, radius * std::uniform_real_distribution<double>(0.2, 1.0)(rng), unit(draw()));
      const Vec x2 = axpy(x0, radius * std::uniform_real_distribution<double>(0.2, 1.0)(rng), unit(draw()));
      const Vec v = unit(draw());
      const double dx = nrm.x(diff(x1, x2));
      if (dx == 0.0) continue;
      const Vec d = diff(apply_derivative(p, x1, v, opts.fd_step), apply_derivative(p, x2, v, opts.fd_step));
      w2 = std::max(w2, nrm.r(d) / dx);
    }
    for (double w : {w1, w2, w3})
      if (!std::isfinite(w)) throw SamplingFailed("certificate sampling produced a non-finite value");
    return make_certificate(w1, w2, w3, "sampled");
  } catch (const SamplingFailed&) {
    throw;
  } catch (const std::exception& e) {
    throw SamplingFailed(std::string("evaluator failed during certification: ") + e.what());
  }
}

IterateResult iterate(const NewtonProblem& p, Vec x0, const IterateOptions& opts) {
  const Norms nrm = norms_of(p);
  IterateResult out;
  if (opts.compute_certificate) out.certificate = certify(p, x0, opts.certify);
  Vec x = std::move(x0);
  Vec a = p.residual(x);
  double r = nrm.r(a);
  out.history.push_back(r);
  for (int it = 0; r > opts.tol; ++it) {
    if (it >= opts.max_iter) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "Newton iteration did not reach tol %g in %d iterations (residual %g)",
                    opts.tol, opts.max_iter, r);
      throw NoConvergence(buf, out.history);
    }
    const Vec step = p.right_inverse(x, a);
    double lambda = 1.0;
    Vec xn, an;
    double rn = 0.0;
    for (int h = 0;; ++h) {
      xn = axpy(x, -lambda, step);
      an = p.residual(xn);
      rn = nrm.r(an);
      if (std::isfinite(rn) && rn <= r) break;
      if (h >= opts.max_halvings) {
        out.history.push_back(rn);
        throw NoConvergence("residual increased despite damping", out.history);
      }
      lambda *= 0.5;
      out.damped = true;
    }
    x = std::move(xn);
    a = std::move(an);
    r = rn;
    out.history.push_back(r);
    out.iterations = it + 1;
  }
  if (out.damped) out.certificate.applicable = false;
  out.x = std::move(x);
  return out;
}

}  // namespace rhsolve
