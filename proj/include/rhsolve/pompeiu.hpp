#pragma once

// Cauchy transform T0 phi(z) = -(1/pi) iint phi(zeta) / (zeta - z) dA of a
// density supported on a closed annular band a <= |zeta| <= b, and the smooth
// radial cutoffs whose d-bar derivative produces such densities.

#include <functional>
#include <vector>

#include "rhsolve/boundary_core.hpp"

namespace rhsolve {

/// S(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}) on [0, 1], 0 below, 1 above.
double smoothstep(double x);
double smoothstep_derivative(double x);

/// Radial cutoff equal to 1 on one side of [a, b] and 0 on the other.
struct RadialCutoff {
  double a = 0.0;
  double b = 1.0;
  /// true: 0 for r <= a, 1 for r >= b. false: the reverse.
  bool rising = true;

  double value(double r) const;
  double derivative(double r) const;
  /// d-bar of chi(|z|) = chi'(r) z / (2 r).
  cplx dbar(cplx z) const;
};

/// Composite Gauss-Legendre rule in r on [a, b] (32 nodes per panel).
struct RadialRule {
  std::vector<double> r;
  std::vector<double> w;
};
RadialRule gauss_legendre_rule(double a, double b, int panels = 4);

/// Angular Fourier modes phi_m(r), m in (-M/2, M/2], FFT ordered, of a density
/// on the circle of radius r.
using ModalDensity = std::function<std::vector<cplx>(double r)>;

/// Modes by the trapezoid rule (FFT) on M equispaced angles.
ModalDensity sampled_density(std::function<cplx(cplx)> phi, int modes);

class PompeiuOperator {
 public:
  /// Density supported in a <= r <= b carrying modes m in (-M/2, M/2].
  PompeiuOperator(double a, double b, int modes, int panels = 4);

  /// Fourier modes of T0 phi on |z| = rho, FFT ordered with length M; mode p
  /// of the output comes from density mode p + 1.
  std::vector<cplx> circle_modes(const ModalDensity& phi, double rho) const;

  /// Values of T0 phi at the N >= M equispaced nodes of |z| = rho.
  std::vector<cplx> on_circle(const ModalDensity& phi, double rho, int N) const;

  cplx at(const ModalDensity& phi, cplx z) const;

  double inner() const noexcept { return a_; }
  double outer() const noexcept { return b_; }
  int modes() const noexcept { return M_; }
  /// Polar area weights of the tensor rule; they sum to pi (b^2 - a^2).
  std::vector<double> area_weights() const;

 private:
  void accumulate(const ModalDensity& phi, const RadialRule& rule, double rho,
                  std::vector<cplx>& out) const;

  double a_, b_;
  int M_, panels_;
  RadialRule rule_;
};

}  // namespace rhsolve
