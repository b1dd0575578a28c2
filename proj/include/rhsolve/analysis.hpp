#pragma once

// Harmonic measure of the annulus and the relation between the flux of
// log R, the winding on the inner circle and the zeros of a solution.

#include <optional>
#include <vector>

#include "rhsolve/annulus_solver.hpp"

namespace rhsolve {

/// h(z) = log|z| / log q: 1 on |z| = q, 0 on |z| = 1. Component 0 gives 1 - h.
class HarmonicMeasure {
 public:
  HarmonicMeasure(double q, int component = 1);
  double operator()(cplx z) const;

 private:
  double q_;
  int component_;
};

struct IdentityZero {
  cplx position;
  int multiplicity = 1;
  double h1 = 0.0;
};

struct IdentityReport {
  /// c_log of the harmonic extension of log R.
  double lhs = 0.0;
  /// sum_j h1(z_j) + k1.
  double rhs = 0.0;
  double diff = 0.0;
  /// Winding on |z| = q, counterclockwise.
  int k1 = 0;
  int k1_coherent = 0;
  std::vector<IdentityZero> zeros_used;
};

IdentityReport check_identity(const AnnulusSolution& solution, const TrigPolynomial& r0,
                              const TrigPolynomial& r1);
/// Throws NotRadialFamily unless both families are circles centred at 0.
IdentityReport check_identity(const AnnulusSolution& solution, const CurveFamily& family0,
                              const CurveFamily& family1);

struct SurjectivityRow {
  double target = 0.0;
  double realized = 0.0;
  double error = 0.0;
  int zero_count = 0;
  std::optional<cplx> zero;
};

/// R0 = 1, R1 = q^t for each target t, solved in closed form.
std::vector<SurjectivityRow> surjectivity_demo(const std::vector<double>& targets, double q,
                                               double psi = 0.0, int grid = 256);

struct MinimalZeroSpec {
  int k1 = 0;
  /// Radius q^{s - k1} of the single zero, absent for integer s.
  std::optional<double> zero_radius;
};

MinimalZeroSpec minimal_zero_selector(double s, double q);

}  // namespace rhsolve
