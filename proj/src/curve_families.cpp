#include "rhsolve/curve_families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rhsolve/errors.hpp"

namespace rhsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class CircleFamily final : public DefiningFunction {
 public:
  CircleFamily(TrigPolynomial r, TrigPolynomial cre, TrigPolynomial cim)
      : r_(std::move(r)), cre_(std::move(cre)), cim_(std::move(cim)) {}

  cplx center(double t) const { return {cre_(t), cim_(t)}; }

  double rho(double t, cplx w) const override {
    const double r = r_(t);
    return std::norm(w - center(t)) - r * r;
  }
  cplx d_wbar(double t, cplx w) const override { return w - center(t); }
  double d_theta(double t, cplx w) const override {
    const cplx dc(cre_.derivative(t), cim_.derivative(t));
    return -2.0 * std::real(std::conj(w - center(t)) * dc) - 2.0 * r_(t) * r_.derivative(t);
  }
  double ray_radius(double t, double psi) const override {
    const cplx c = center(t);
    const double beta = std::real(c * std::polar(1.0, -psi));
    const double r = r_(t);
    return beta + std::sqrt(beta * beta + r * r - std::norm(c));
  }
  std::optional<std::function<double(double)>> radial_profile() const override {
    if (!cre_.is_constant() || !cim_.is_constant() || cre_.constant_term() != 0.0 ||
        cim_.constant_term() != 0.0)
      return std::nullopt;
    TrigPolynomial r = r_;
    return std::function<double(double)>([r](double t) { return r(t); });
  }
  std::string kind() const override { return "circle"; }

 private:
  TrigPolynomial r_, cre_, cim_;
};

class EllipseFamily final : public DefiningFunction {
 public:
  EllipseFamily(TrigPolynomial p, TrigPolynomial q, TrigPolynomial phi)
      : p_(std::move(p)), q_(std::move(q)), phi_(std::move(phi)) {}

  double rho(double t, cplx w) const override {
    const cplx h = std::polar(1.0, -phi_(t)) * w;
    const double p = p_(t), q = q_(t);
    return h.real() * h.real() / (p * p) + h.imag() * h.imag() / (q * q) - 1.0;
  }
  cplx d_wbar(double t, cplx w) const override {
    const double ph = phi_(t);
    const cplx h = std::polar(1.0, -ph) * w;
    const double p = p_(t), q = q_(t);
    return std::polar(1.0, ph) * cplx(h.real() / (p * p), h.imag() / (q * q));
  }
  double d_theta(double t, cplx w) const override {
    const cplx h = std::polar(1.0, -phi_(t)) * w;
    const double x = h.real(), y = h.imag();
    const double p = p_(t), q = q_(t);
    return -2.0 * x * x * p_.derivative(t) / (p * p * p) -
           2.0 * y * y * q_.derivative(t) / (q * q * q) +
           2.0 * x * y * (1.0 / (p * p) - 1.0 / (q * q)) * phi_.derivative(t);
  }
  double ray_radius(double t, double psi) const override {
    const double a = psi - phi_(t);
    const double p = p_(t), q = q_(t);
    const double c = std::cos(a), s = std::sin(a);
    return 1.0 / std::sqrt(c * c / (p * p) + s * s / (q * q));
  }
  std::optional<std::function<double(double)>> radial_profile() const override {
    if (!p_.is_constant() || !q_.is_constant() || p_.constant_term() != q_.constant_term())
      return std::nullopt;
    const double r = p_.constant_term();
    return std::function<double(double)>([r](double) { return r; });
  }
  std::string kind() const override { return "ellipse"; }

 private:
  TrigPolynomial p_, q_, phi_;
};

class DivisorFamily final : public DefiningFunction {
 public:
  DivisorFamily(std::shared_ptr<const DefiningFunction> base, TrigCoefficients g)
      : base_(std::move(base)), g_(std::move(g)) {}

  double rho(double t, cplx w) const override { return base_->rho(t, g(t) * w); }
  cplx d_wbar(double t, cplx w) const override {
    const cplx gv = g(t);
    return std::conj(gv) * base_->d_wbar(t, gv * w);
  }
  double d_theta(double t, cplx w) const override {
    const cplx gv = g(t);
    const cplx u = gv * w;
    const cplx dg = trig_evaluate_derivative(g_, t);
    return base_->d_theta(t, u) + 2.0 * std::real(base_->d_w(t, u) * dg * w);
  }
  double ray_radius(double t, double psi) const override {
    const cplx gv = g(t);
    return base_->ray_radius(t, psi + std::arg(gv)) / std::abs(gv);
  }
  std::string kind() const override { return "divisor(" + base_->kind() + ")"; }

 private:
  cplx g(double t) const { return trig_evaluate(g_, t); }
  std::shared_ptr<const DefiningFunction> base_;
  TrigCoefficients g_;
};

class ReflectedFamily final : public DefiningFunction {
 public:
  explicit ReflectedFamily(std::shared_ptr<const DefiningFunction> base) : base_(std::move(base)) {}

  double rho(double t, cplx w) const override { return base_->rho(-t, w); }
  cplx d_wbar(double t, cplx w) const override { return base_->d_wbar(-t, w); }
  double d_theta(double t, cplx w) const override { return -base_->d_theta(-t, w); }
  double ray_radius(double t, double psi) const override { return base_->ray_radius(-t, psi); }
  std::optional<std::function<double(double)>> radial_profile() const override {
    auto r = base_->radial_profile();
    if (!r) return std::nullopt;
    auto f = *r;
    return std::function<double(double)>([f](double t) { return f(-t); });
  }
  std::string kind() const override { return "reflected(" + base_->kind() + ")"; }

 private:
  std::shared_ptr<const DefiningFunction> base_;
};

}  // namespace

double DefiningFunction::ray_radius(double theta, double psi) const {
  const cplx dir = std::polar(1.0, psi);
  if (rho(theta, 0.0) >= 0.0) throw ZeroNotEnclosed("rho(theta, 0) >= 0: curve does not enclose 0");
  double lo = 0.0, hi = 1.0;
  for (int i = 0; rho(theta, hi * dir) <= 0.0; ++i) {
    lo = hi;
    hi *= 2.0;
    if (i > 60) throw ZeroNotEnclosed("curve is unbounded along a ray");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rho(theta, mid * dir) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> CurveFamily::residual(const BoundaryTrace& trace) const {
  std::vector<double> r(trace.size());
  for (int j = 0; j < trace.size(); ++j) r[j] = rho(trace.grid().node(j), trace[j]);
  return r;
}

double CurveFamily::residual_sup(const BoundaryTrace& trace) const {
  double m = 0.0;
  for (double v : residual(trace)) m = std::max(m, std::abs(v));
  return m;
}

CurveFamily builtin_circle_family(const TrigPolynomial& radius, const TrigPolynomial& center_re,
                                  const TrigPolynomial& center_im) {
  const int m = 64 * std::max({1, radius.degree(), center_re.degree(), center_im.degree()});
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    if (radius(t) - std::hypot(center_re(t), center_im(t)) <= 0.0)
      throw ZeroNotEnclosed("circle family: R(theta) <= |c(theta)| at theta = " +
                            std::to_string(t));
  }
  return CurveFamily(std::make_shared<CircleFamily>(radius, center_re, center_im));
}

CurveFamily builtin_ellipse_family(const TrigPolynomial& p, const TrigPolynomial& q,
                                   const TrigPolynomial& phi) {
  if (p.sampled_min() <= 0.0 || q.sampled_min() <= 0.0)
    throw DegenerateAxis("ellipse family: semi-axes must stay positive");
  return CurveFamily(std::make_shared<EllipseFamily>(p, q, phi));
}

CurveFamily divisor_transform(const CurveFamily& family, const BoundaryTrace& multiplier) {
  double lo = std::abs(multiplier[0]), hi = lo;
  for (const cplx& g : multiplier.values()) {
    lo = std::min(lo, std::abs(g));
    hi = std::max(hi, std::abs(g));
  }
  if (hi == 0.0 || lo < 1e-12 * hi)
    throw MultiplierVanishes("divisor multiplier vanishes on the boundary");
  return CurveFamily(
      std::make_shared<DivisorFamily>(family.defining_function(), trig_coefficients(multiplier)));
}

CurveFamily reflect_parameter(const CurveFamily& family) {
  return CurveFamily(std::make_shared<ReflectedFamily>(family.defining_function()));
}

std::vector<cplx> eta_values(const CurveFamily& family, const BoundaryTrace& trace) {
  std::vector<cplx> eta(trace.size());
  for (int j = 0; j < trace.size(); ++j) {
    const cplx w = trace[j];
    eta[j] = w * std::conj(family.d_wbar(trace.grid().node(j), w));
    if (eta[j] == 0.0) throw ZeroOnTrace("eta vanishes on the trace");
  }
  return eta;
}

EtaDecomposition eta_decompose(const CurveFamily& family, const BoundaryTrace& trace) {
  return eta_decompose_values(trace.grid(), eta_values(family, trace));
}

EtaDecomposition eta_decompose_values(const BoundaryGrid& grid, const std::vector<cplx>& eta) {
  const int n = grid.size();
  double hi = 0.0, lo = std::abs(eta[0]);
  for (const cplx& e : eta) {
    hi = std::max(hi, std::abs(e));
    lo = std::min(lo, std::abs(e));
  }
  if (lo < 1e-14 * hi) throw ZeroOnTrace("eta numerically vanishes on the trace");

  std::vector<double> a(n), b(n);
  b[0] = std::arg(eta[0]);
  for (int j = 0; j < n; ++j) {
    a[j] = std::log(std::abs(eta[j]));
    if (j > 0) b[j] = b[j - 1] + std::arg(eta[j] / eta[j - 1]);
  }
  const double closing = b[n - 1] + std::arg(eta[0] / eta[n - 1]) - b[0];
  const int winding = static_cast<int>(std::lround(closing / kTwoPi));
  if (winding != 0)
    throw EtaWindingNonzero("eta winds " + std::to_string(winding) + " times along the trace",
                            winding);
  EtaDecomposition d{BoundaryTrace::from_real(grid, a), BoundaryTrace::from_real(grid, b),
                     BoundaryTrace::from_real(grid, hilbert_transform(b)), 0};
  return d;
}

CurvatureReport curvature_floor_check(const CurveFamily& family, const BoundaryTrace& trace,
                                      double dbar_floor, double eta_floor) {
  CurvatureReport r;
  r.min_dbar = r.min_eta = INFINITY;
  for (int j = 0; j < trace.size(); ++j) {
    const double t = trace.grid().node(j);
    const cplx g = family.d_wbar(t, trace[j]);
    r.min_dbar = std::min(r.min_dbar, std::abs(g));
    r.min_eta = std::min(r.min_eta, std::abs(trace[j] * std::conj(g)));
  }
  if (r.min_dbar < dbar_floor)
    r.warnings.push_back("min |d_wbar rho| = " + std::to_string(r.min_dbar) + " below floor");
  if (r.min_eta < eta_floor)
    r.warnings.push_back("min |eta| = " + std::to_string(r.min_eta) + " below floor");
  return r;
}

double sampled_c2_norm(const CurveFamily& family, double radius, int samples) {
  const double h = 1e-4;
  double m = 0.0;
  auto f = [&](double t, double x, double y) { return family.rho(t, cplx(x, y)); };
  for (int it = 0; it < samples; ++it) {
    const double t = kTwoPi * it / samples;
    for (int ir = 0; ir <= samples / 2; ++ir) {
      const double r = radius * ir / (samples / 2);
      for (int ia = 0; ia < samples; ++ia) {
        const cplx w = std::polar(r, kTwoPi * ia / samples);
        const double x = w.real(), y = w.imag();
        const double v = f(t, x, y);
        const cplx g = family.d_wbar(t, w);
        const double dx = 2.0 * g.real(), dy = 2.0 * g.imag();
        const double dt = family.d_theta(t, w);
        const double dxx = (f(t, x + h, y) - 2 * v + f(t, x - h, y)) / (h * h);
        const double dyy = (f(t, x, y + h) - 2 * v + f(t, x, y - h)) / (h * h);
        const double dtt = (f(t + h, x, y) - 2 * v + f(t - h, x, y)) / (h * h);
        const double dxy = (f(t, x + h, y + h) - f(t, x + h, y - h) - f(t, x - h, y + h) +
                            f(t, x - h, y - h)) / (4 * h * h);
        const double dxt = (f(t + h, x + h, y) - f(t + h, x - h, y) - f(t - h, x + h, y) +
                            f(t - h, x - h, y)) / (4 * h * h);
        const double dyt = (f(t + h, x, y + h) - f(t + h, x, y - h) - f(t - h, x, y + h) +
                            f(t - h, x, y - h)) / (4 * h * h);
        for (double c : {v, dx, dy, dt, dxx, dyy, dtt, dxy, dxt, dyt}) m = std::max(m, std::abs(c));
      }
    }
  }
  return m;
}

}  // namespace rhsolve
