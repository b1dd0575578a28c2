#pragma once

// Riemann-Hilbert problem on the annulus q < |z| < 1: gluing of two collar
// disc solutions with a d-bar correction, a global Newton correction, and the
// closed-form solver for circle families centred at the origin.

#include <memory>
#include <optional>
#include <vector>

#include "rhsolve/boundary_core.hpp"
#include "rhsolve/curve_families.hpp"
#include "rhsolve/disc_solver.hpp"
#include "rhsolve/newton_engine.hpp"
#include "rhsolve/pompeiu.hpp"
#include "rhsolve/trig_polynomial.hpp"

namespace rhsolve {

/// Outer collar s0 < |z| <= 1 and inner collar q <= |z| < s1, with the
/// cutoffs switching on the bands [s0, sqrt(s0)] and [sqrt(q s1), s1].
struct AnnulusDomain {
  explicit AnnulusDomain(double q, double outer_exponent = 1.0 / 3.0,
                         double inner_exponent = 2.0 / 3.0);

  double q;
  double s0;
  double s1;
  /// chi0 = 1 near |z| = 1, chi1 = 1 near |z| = q.
  RadialCutoff chi0;
  RadialCutoff chi1;

  Domain domain() const { return Domain::annulus(q); }
  PompeiuOperator band_operator(int component, int modes, int panels = 4) const;
};

/// f(z) = sum_{k>=0} A_k z^k + sum_{k>=1} B_k (q/z)^k on the annulus.
struct LaurentSeries {
  double q = 0.5;
  std::vector<cplx> outer;  // A_0 .. A_{K-1}
  std::vector<cplx> inner;  // B_1 .. B_{K-1}, stored at k - 1

  /// K = N/2 amplitudes read off the traces on |z| = 1 and |z| = q.
  static LaurentSeries from_traces(std::span<const cplx> gamma0, std::span<const cplx> gamma1,
                                   double q);
  /// Traces on the N = 2K node grids of |z| = 1 and |z| = q.
  std::vector<cplx> outer_trace() const;
  std::vector<cplx> inner_trace() const;
  cplx value(cplx z) const;
  int node_count() const { return 2 * static_cast<int>(outer.size()); }
};

/// u = Re F + c_log log|z| with F holomorphic on the annulus.
struct LaurentHarmonic {
  double q = 0.5;
  double c_log = 0.0;
  LaurentSeries holomorphic;
  /// Modes with q^k below the smallest normal double; they decouple.
  int capped_modes = 0;

  double value(cplx z) const;
};

/// Harmonic function on the annulus with the given real boundary values on
/// |z| = 1 and |z| = q (same node count).
LaurentHarmonic harmonic_extend_annulus(std::span<const double> gamma0,
                                        std::span<const double> gamma1, double q);

struct AnnulusWindings {
  int gamma0 = 0;
  /// Counterclockwise winding of the trace on |z| = q.
  int gamma1_disc = 0;
  /// Winding along |z| = q traversed clockwise, as part of the boundary.
  int gamma1_coherent = 0;
};

AnnulusWindings annulus_windings(const BoundaryTrace& gamma0, const BoundaryTrace& gamma1);

struct GlueReport {
  int n0 = 0;
  int n1 = 0;
  int grid = 0;
  double pre_newton_residual = 0.0;
  /// sup of the d-bar correction u = T0 phi on both circles.
  double dbar_norm = 0.0;
  /// Largest C^{1,alpha} norm of the two collar solutions.
  double collar_norm = 0.0;
};

struct AnnulusSolution {
  double q = 0.5;
  BoundaryTrace gamma0{BoundaryGrid(16), std::vector<cplx>(16)};
  BoundaryTrace gamma1{BoundaryGrid(16), std::vector<cplx>(16)};
  AnnulusWindings windings;
  std::vector<LocatedZero> zeros;
  double residual_gamma0 = 0.0;
  double residual_gamma1 = 0.0;
  std::optional<GlueReport> glue;
  std::optional<NewtonCertificate> certificate;
  std::vector<double> newton_history;
  int iterations = 0;
  bool damped = false;

  int zero_count() const;
};

struct GlueOptions {
  DiscOptions disc;
  /// Required bound on the collar decay max(s0^n0, (q/s1)^n1).
  double glue_threshold = 0.5;
  /// GlueTooCoarse above this pre-Newton residual.
  double newton_basin_bound = 0.5;
  int panels = 4;
};

struct GlueResult {
  AnnulusDomain domain;
  BoundaryTrace gamma0;
  BoundaryTrace gamma1;
  GlueReport report;
  DiscSolution collar0;
  /// Solution of the reflected inner family in the variable zeta = q / z.
  DiscSolution collar1;
  /// Nonnegative modes of the two collar solutions on the common grid.
  std::vector<cplx> outer_modes;
  std::vector<cplx> inner_modes;

  /// h_n(z) = chi0 f0(z) + chi1 f1(q/z) - T0 phi(z) evaluated directly.
  cplx direct_value(cplx z) const;
};

GlueResult glue_construct(const CurveFamily& family0, const CurveFamily& family1, int n0, int n1,
                          double q, const GlueOptions& opts = {});
inline GlueResult glue_construct(const CurveFamily& family0, const CurveFamily& family1, int n,
                                 double q, const GlueOptions& opts = {}) {
  return glue_construct(family0, family1, n, n, q, opts);
}

struct AnnulusOptions {
  GlueOptions glue;
  double tol = 1e-10;
  int max_iter = 30;
  int max_halvings = 6;
  bool certify = true;
  CertifyOptions certify_options;
  /// Neumann series for (I - E)^{-1}: stop on a term ratio above
  /// neumann_ratio or after neumann_terms terms.
  double neumann_ratio = 0.9;
  int neumann_terms = 20;
  /// Skip the Neumann path and use the least-squares solve directly.
  bool force_fallback = false;
  double holder_alpha = 0.5;
  ZeroSearchOptions zeros;
};

/// Laurent amplitudes as the real Newton unknown (Re, Im of A_k, then B_k).
Vec laurent_to_vec(const LaurentSeries& s);
LaurentSeries vec_to_laurent(const Vec& x, double q);

/// Newton problem on the amplitudes for the given collar solutions P0 and the
/// reflected P1 (traces of winding n0 and n1). `fallback_used` is set when a
/// linear solve left the Neumann path.
NewtonProblem annulus_newton_problem(const CurveFamily& family0, const CurveFamily& family1,
                                     const GlueResult& glue, const AnnulusOptions& opts,
                                     std::shared_ptr<bool> fallback_used = nullptr);

AnnulusSolution solve_annulus(const CurveFamily& family0, const CurveFamily& family1, int n0,
                              int n1, double q, const AnnulusOptions& opts = {});

/// |f| = R0 on |z| = 1 and R1 on |z| = q with f = z^k1 prod (z - z_j) e^F.
/// The data must satisfy c_log(log R) = k1 + sum h1(z_j); the mismatch is
/// left in `log_mismatch`.
struct RadialConstruction {
  AnnulusSolution solution;
  double s = 0.0;
  int k1 = 0;
  double log_mismatch = 0.0;
};

RadialConstruction annulus_radial_from_zeros(const TrigPolynomial& r0, const TrigPolynomial& r1,
                                             double q, int k1, const std::vector<cplx>& zeros,
                                             int grid = 256);

/// The minimal-zero solution: k1 = floor(s) and one zero at q^{s - k1} e^{i psi}
/// unless s is an integer.
AnnulusSolution solve_annulus_radial(const TrigPolynomial& r0, const TrigPolynomial& r1, double q,
                                     double psi = 0.0, int grid = 256);

/// min over unimodular c of max |f - c g| over both traces, after resampling
/// to a common grid.
double aligned_difference(const AnnulusSolution& f, const AnnulusSolution& g);

}  // namespace rhsolve
