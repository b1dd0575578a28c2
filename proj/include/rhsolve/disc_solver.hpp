#pragma once

// Riemann-Hilbert problem on the unit disc with prescribed winding number n,
// solved for g in f = z^n e^g.

#include <optional>
#include <vector>

#include "rhsolve/boundary_core.hpp"
#include "rhsolve/curve_families.hpp"
#include "rhsolve/newton_engine.hpp"
#include "rhsolve/trig_polynomial.hpp"

namespace rhsolve {

struct DiscSolution {
  int winding = 0;
  BoundaryTrace g_trace;
  BoundaryTrace f_trace;
  double residual_sup = 0.0;
  HolderNormReport residual_holder;
  std::vector<double> newton_history;
  int iterations = 0;
  bool damped = false;
  std::optional<NewtonCertificate> certificate;
  /// Grid doublings performed before the accepted run.
  int refinements = 0;
};

struct DiscOptions {
  int grid = 256;
  /// When larger than grid, an unconverged or under-resolved solve is
  /// restarted from scratch on a doubled grid, up to this size.
  int max_grid = 0;
  double tol = 1e-10;
  int max_iter = 30;
  /// Residual-increase halvings per step; 0 disables damping.
  int max_halvings = 6;
  /// Boundary values of g to start from instead of the radial initialisation.
  std::optional<std::vector<cplx>> initial_g;
  bool certify = false;
  CertifyOptions certify_options;
};

/// Linearisation data at a boundary trace f: a = d_wbar rho(theta, f) and the
/// eta decomposition, plus a real right-hand side.
struct LinearRHSystem {
  BoundaryTrace a_trace;
  EtaDecomposition eta_dec;
  BoundaryTrace rhs;
};

LinearRHSystem make_linear_system(const CurveFamily& family, const BoundaryTrace& f_trace,
                                  const BoundaryTrace& rhs);

/// (1/2) e^{b~ - i b} (phi + i T phi) with phi = e^{-a - b~} rhs: the
/// boundary values of a holomorphic k with 2 Re(e^{a + i b} k) = rhs.
std::vector<cplx> log_step(const EtaDecomposition& d, std::span<const double> rhs);

/// h = (1/2) f e^{b~ - i b} (phi + i T phi), phi = e^{-a - b~} g_rhs, which
/// satisfies 2 Re(conj(d_wbar rho) h) = g_rhs. Not projected, so aliasing
/// leakage into negative modes stays measurable.
BoundaryTrace right_inverse_apply(const LinearRHSystem& sys, const BoundaryTrace& f_trace,
                                  const BoundaryTrace& g_rhs);

/// The Newton problem in the coordinates x = (Re c_k, Im c_k), k = 0..N/2-1,
/// of g. Exposed so the generic engine can be driven directly.
NewtonProblem disc_newton_problem(const CurveFamily& family, int n, int grid);
std::vector<cplx> disc_modes_to_trace(const Vec& x);
Vec disc_trace_to_modes(std::span<const cplx> g);

/// g0 = u + iTu with u = log of the family's ray radius along arg z^n.
std::vector<cplx> disc_initial_guess(const CurveFamily& family, int n, int grid);

DiscSolution solve_disc(const CurveFamily& family, int n, const DiscOptions& opts = {});

/// f = z^n exp(u + iTu), u the interpolant of log R.
DiscSolution solve_disc_circle_closed_form(const TrigPolynomial& radius, int n, int grid = 256);

/// max |c_k| over N/4 <= k < N/2 relative to 1 + max_k |c_k|.
double spectral_tail(std::span<const cplx> values);

/// Discrete Hoelder report of a residual; grids finer than 4096 nodes are
/// scanned on every (N/4096)-th node to bound the quadratic pair scan.
HolderNormReport residual_holder_report(const BoundaryGrid& grid, std::span<const double> r);

/// Rotates f so that the mean of Im g is zero. Only meaningful for families
/// invariant under rotation (circles centred at 0), where it maps solutions
/// to solutions.
void align_gauge(DiscSolution& s);

struct StepDiagnostics {
  double step_norm = 0.0;
  double predicted_residual = 0.0;
  double actual_residual = 0.0;
};

/// One additive step f - lambda B(rho(., f)) from f_trace.
StepDiagnostics newton_step_diagnostics(const CurveFamily& family, const BoundaryTrace& f_trace,
                                        double damping = 1.0);

/// sup_j |d/dtheta rho(theta, f(theta))| evaluated via the chain rule.
double differentiated_residual(const CurveFamily& family, const DiscSolution& s);

/// Order estimate log(r3/r2)/log(r2/r1) from the last three history entries
/// above `floor`; NaN when fewer than three qualify.
double convergence_order(const std::vector<double>& history, double floor = 1e-13);

}  // namespace rhsolve
