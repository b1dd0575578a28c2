#pragma once

// Families of Jordan curves {w : rho(theta, w) = 0}, one curve per boundary
// angle, given by closed-form defining functions.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rhsolve/boundary_core.hpp"
#include "rhsolve/trig_polynomial.hpp"

namespace rhsolve {

/// Closed-form evaluator bundle for a real defining function rho(theta, w).
/// Wirtinger convention: d/dw = (d/dx - i d/dy)/2, d/dwbar = (d/dx + i d/dy)/2.
class DefiningFunction {
 public:
  virtual ~DefiningFunction() = default;

  virtual double rho(double theta, cplx w) const = 0;
  virtual cplx d_wbar(double theta, cplx w) const = 0;
  virtual double d_theta(double theta, cplx w) const = 0;
  cplx d_w(double theta, cplx w) const { return std::conj(d_wbar(theta, w)); }

  /// Distance from 0 to the curve along the ray of angle psi. The default
  /// brackets and bisects; builtin families override it analytically.
  virtual double ray_radius(double theta, double psi) const;

  /// R(theta) when every curve is the circle |w| = R(theta).
  virtual std::optional<std::function<double(double)>> radial_profile() const {
    return std::nullopt;
  }
  virtual std::string kind() const = 0;
};

class CurveFamily {
 public:
  explicit CurveFamily(std::shared_ptr<const DefiningFunction> f) : f_(std::move(f)) {}

  double rho(double theta, cplx w) const { return f_->rho(theta, w); }
  cplx d_w(double theta, cplx w) const { return f_->d_w(theta, w); }
  cplx d_wbar(double theta, cplx w) const { return f_->d_wbar(theta, w); }
  double d_theta(double theta, cplx w) const { return f_->d_theta(theta, w); }
  double ray_radius(double theta, double psi) const { return f_->ray_radius(theta, psi); }
  std::optional<std::function<double(double)>> radial_profile() const {
    return f_->radial_profile();
  }
  std::string kind() const { return f_->kind(); }
  const std::shared_ptr<const DefiningFunction>& defining_function() const noexcept { return f_; }

  /// rho(theta_j, values_j) at every node.
  std::vector<double> residual(const BoundaryTrace& trace) const;
  /// max_j |rho(theta_j, values_j)|.
  double residual_sup(const BoundaryTrace& trace) const;

 private:
  std::shared_ptr<const DefiningFunction> f_;
};

/// rho = |w - c(theta)|^2 - R(theta)^2 with c = c_re + i c_im.
CurveFamily builtin_circle_family(const TrigPolynomial& radius, const TrigPolynomial& center_re = {},
                                  const TrigPolynomial& center_im = {});

/// rho = (Re w'/p)^2 + (Im w'/q)^2 - 1 with w' = e^{-i phi} w.
CurveFamily builtin_ellipse_family(const TrigPolynomial& p, const TrigPolynomial& q,
                                   const TrigPolynomial& phi = {});

/// rho~(theta, w) = rho(theta, g(theta) w) where g is the trigonometric
/// interpolant of the multiplier trace.
CurveFamily divisor_transform(const CurveFamily& family, const BoundaryTrace& multiplier);

/// rho~(theta, w) = rho(-theta, w): the family seen from the reflected
/// parametrisation zeta = e^{i theta} -> q / zeta of an inner circle.
CurveFamily reflect_parameter(const CurveFamily& family);

struct EtaDecomposition {
  BoundaryTrace a;
  BoundaryTrace b;
  BoundaryTrace b_tilde;
  int eta_winding = 0;
};

/// eta_j = w_j conj(d_wbar rho(theta_j, w_j)) = e^{a_j + i b_j}.
std::vector<cplx> eta_values(const CurveFamily& family, const BoundaryTrace& trace);
EtaDecomposition eta_decompose(const CurveFamily& family, const BoundaryTrace& trace);
/// Same decomposition for eta values supplied directly.
EtaDecomposition eta_decompose_values(const BoundaryGrid& grid, const std::vector<cplx>& eta);

struct CurvatureReport {
  double min_dbar = 0.0;
  double min_eta = 0.0;
  std::vector<std::string> warnings;
};

CurvatureReport curvature_floor_check(const CurveFamily& family, const BoundaryTrace& trace,
                                      double dbar_floor = 1e-3, double eta_floor = 1e-3);

/// Sampled C^2 norm of rho on [0, 2 pi) x {|w| <= radius}: the maximum of |rho|,
/// its first partials and its second partials (finite differences).
double sampled_c2_norm(const CurveFamily& family, double radius, int samples = 24);

}  // namespace rhsolve
