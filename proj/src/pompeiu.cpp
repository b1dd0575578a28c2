#include "rhsolve/pompeiu.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rhsolve/fft.hpp"

namespace rhsolve {

namespace {

double flank(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

double flank_derivative(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x) / (x * x); }

int signed_mode(int idx, int M) { return idx <= M / 2 ? idx : idx - M; }

}  // namespace

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double A = flank(x), B = flank(1.0 - x);
  return A / (A + B);
}

double smoothstep_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double A = flank(x), B = flank(1.0 - x);
  const double dA = flank_derivative(x), dB = -flank_derivative(1.0 - x);
  return (dA * B - A * dB) / ((A + B) * (A + B));
}

double RadialCutoff::value(double r) const {
  const double s = smoothstep((r - a) / (b - a));
  return rising ? s : 1.0 - s;
}

double RadialCutoff::derivative(double r) const {
  const double d = smoothstep_derivative((r - a) / (b - a)) / (b - a);
  return rising ? d : -d;
}

cplx RadialCutoff::dbar(cplx z) const {
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return derivative(r) * z / (2.0 * r);
}

RadialRule gauss_legendre_rule(double a, double b, int panels) {
  using GL = boost::math::quadrature::gauss<double, 32>;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  RadialRule rule;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.r.push_back(mid - 0.5 * h * x[i]);
      rule.w.push_back(0.5 * h * w[i]);
      if (x[i] != 0.0) {
        rule.r.push_back(mid + 0.5 * h * x[i]);
        rule.w.push_back(0.5 * h * w[i]);
      }
    }
  }
  return rule;
}

ModalDensity sampled_density(std::function<cplx(cplx)> phi, int modes) {
  return [phi = std::move(phi), modes](double r) {
    std::vector<cplx> v(modes);
    for (int j = 0; j < modes; ++j) v[j] = phi(std::polar(r, 2.0 * std::numbers::pi * j / modes));
    std::vector<cplx> c = fft::forward(v);
    for (cplx& x : c) x /= double(modes);
    return c;
  };
}

PompeiuOperator::PompeiuOperator(double a, double b, int modes, int panels)
    : a_(a), b_(b), M_(modes), panels_(panels), rule_(gauss_legendre_rule(a, b, panels)) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("band needs 0 < a < b");
  if (modes < 2 || modes % 2 != 0) throw std::invalid_argument("mode count must be even");
}

std::vector<double> PompeiuOperator::area_weights() const {
  std::vector<double> w(rule_.w.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.0 * std::numbers::pi * rule_.r[i] * rule_.w[i];
  return w;
}

// Circle |z| = rho, density node r < rho: T0 picks up 2 phi_m (r/rho)^{1-m},
// m <= 0, in mode m - 1. Node r > rho: -2 phi_m (rho/r)^{m-1}, m >= 1.
void PompeiuOperator::accumulate(const ModalDensity& phi, const RadialRule& rule, double rho,
                                 std::vector<cplx>& out) const {
  for (std::size_t i = 0; i < rule.r.size(); ++i) {
    const double r = rule.r[i];
    const std::vector<cplx> c = phi(r);
    if (static_cast<int>(c.size()) != M_) throw std::invalid_argument("density mode count mismatch");
    if (r < rho) {
      const double t = r / rho;
      double pw = t;
      for (int m = 0; m > -M_ / 2; --m) {
        const int idx = (m + M_) % M_;
        out[(m - 1 + M_) % M_] += 2.0 * rule.w[i] * pw * c[idx];
        pw *= t;
      }
    } else if (r > rho) {
      const double t = rho / r;
      double pw = 1.0;
      for (int m = 1; m <= M_ / 2; ++m) {
        out[m - 1] -= 2.0 * rule.w[i] * pw * c[m];
        pw *= t;
      }
    }
  }
}

std::vector<cplx> PompeiuOperator::circle_modes(const ModalDensity& phi, double rho) const {
  std::vector<cplx> out(M_, 0.0);
  if (rho <= a_ || rho >= b_) {
    accumulate(phi, rule_, rho, out);
  } else {
    accumulate(phi, gauss_legendre_rule(a_, rho, panels_), rho, out);
    accumulate(phi, gauss_legendre_rule(rho, b_, panels_), rho, out);
  }
  return out;
}

std::vector<cplx> PompeiuOperator::on_circle(const ModalDensity& phi, double rho, int N) const {
  if (N < M_) throw std::invalid_argument("output grid coarser than the density modes");
  const std::vector<cplx> c = circle_modes(phi, rho);
  std::vector<cplx> full(N, 0.0);
  for (int idx = 0; idx < M_; ++idx) {
    const int p = signed_mode(idx, M_) - (idx == M_ / 2 ? M_ : 0);
    full[(p + N) % N] += c[idx];
  }
  return fft::backward(full);
}

cplx PompeiuOperator::at(const ModalDensity& phi, cplx z) const {
  const double rho = std::abs(z);
  if (rho == 0.0) throw std::invalid_argument("evaluation at the origin");
  const std::vector<cplx> c = circle_modes(phi, rho);
  const double th = std::arg(z);
  cplx s = 0.0;
  for (int idx = 0; idx < M_; ++idx) {
    const int p = signed_mode(idx, M_) - (idx == M_ / 2 ? M_ : 0);
    s += c[idx] * std::polar(1.0, p * th);
  }
  return s;
}

}  // namespace rhsolve
