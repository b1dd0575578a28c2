#pragma once

// Discrete boundary calculus on circles: equispaced grids, trigonometric
// coefficients, the conjugate-function (Hilbert) transform, winding numbers,
// holomorphic extension from boundary traces, zero location and discrete
// Hoelder norms.

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace rhsolve {

using cplx = std::complex<double>;

/// Equispaced nodes theta_j = 2 pi j / N on one boundary circle, N a power of
/// two no smaller than 16.
class BoundaryGrid {
 public:
  explicit BoundaryGrid(int node_count);

  int size() const noexcept { return n_; }
  double node(int j) const noexcept;
  std::vector<double> nodes() const;

  friend bool operator==(const BoundaryGrid&, const BoundaryGrid&) = default;

 private:
  int n_;
};

/// Samples of a function on one boundary circle, identified with their
/// trigonometric interpolant.
class BoundaryTrace {
 public:
  BoundaryTrace(BoundaryGrid grid, std::vector<cplx> values);

  static BoundaryTrace from_real(BoundaryGrid grid, std::span<const double> values);
  static BoundaryTrace sample(BoundaryGrid grid, const std::function<cplx(double)>& f);

  const BoundaryGrid& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.size(); }
  std::span<const cplx> values() const noexcept { return values_; }
  cplx operator[](int j) const noexcept { return values_[j]; }

  std::vector<double> real_part() const;
  std::vector<double> imag_part() const;
  /// True when every imaginary part is below tol * max(1, sup|values|).
  bool is_real(double tol = 1e-12) const;

 private:
  BoundaryGrid grid_;
  std::vector<cplx> values_;
};

/// Coefficients c_k of the trigonometric interpolant sum_k c_k e^{ik theta},
/// for -N/2 < k <= N/2.
class TrigCoefficients {
 public:
  explicit TrigCoefficients(int node_count);
  TrigCoefficients(int node_count, std::vector<cplx> fft_ordered);

  int node_count() const noexcept { return n_; }
  int min_mode() const noexcept { return -n_ / 2 + 1; }
  int max_mode() const noexcept { return n_ / 2; }

  cplx operator()(int k) const;
  cplx& at(int k);

  /// Storage in FFT order (index k mod N).
  std::span<const cplx> fft_ordered() const noexcept { return c_; }

 private:
  int slot(int k) const;
  int n_;
  std::vector<cplx> c_;
};

TrigCoefficients trig_coefficients(const BoundaryTrace& trace);
TrigCoefficients trig_coefficients(std::span<const cplx> values);
/// Inverse of trig_coefficients: values of the interpolant at the nodes.
std::vector<cplx> trig_synthesize(const TrigCoefficients& coeffs);
/// Evaluates the interpolant at an arbitrary angle (and its theta-derivative).
cplx trig_evaluate(const TrigCoefficients& coeffs, double theta);
cplx trig_evaluate_derivative(const TrigCoefficients& coeffs, double theta);
/// Values of the interpolant on m >= N equispaced nodes (zero padding; the
/// Nyquist mode is split symmetrically so real data stays real).
std::vector<cplx> trig_resample(std::span<const cplx> values, int m);

/// Conjugate-function transform: mode k is multiplied by -i sign(k); the mean
/// and the Nyquist mode are set to zero. Throws std::invalid_argument when the
/// trace is not real.
BoundaryTrace hilbert_transform(const BoundaryTrace& trace);
std::vector<double> hilbert_transform(std::span<const double> values);

/// Boundary values of the holomorphic extension: drops strictly negative modes
/// and the Nyquist mode.
std::vector<cplx> analytic_projection(std::span<const cplx> values);
/// max_{k<0} |c_k| relative to max_k |c_k| (0 for the zero trace).
double negative_mode_leakage(std::span<const cplx> values);

std::vector<double> spectral_derivative(std::span<const double> values);
std::vector<cplx> spectral_derivative(std::span<const cplx> values);

struct WindingOptions {
  /// ZeroOnBoundary when min|value| < zero_floor * max|value|.
  double zero_floor = 1e-13;
  /// Upsampling factor of the interpolant used to certify the unwrapping.
  int refine = 4;
};

struct WindingReport {
  int winding = 0;
  /// |total increment / 2 pi - winding|.
  double residue = 0.0;
  double min_modulus = 0.0;
};

WindingReport winding_report(const BoundaryTrace& trace, const WindingOptions& opts = {});
int winding_number(const BoundaryTrace& trace, const WindingOptions& opts = {});

struct HolderNormReport {
  double sup_norm = 0.0;
  double alpha = 0.5;
  double c_alpha = 0.0;
  double c1_alpha = 0.0;
};

/// Discrete Hoelder norms over all node pairs. c_alpha is the alpha-seminorm
/// max |u_i - u_j| / d_ij^alpha with d_ij = |e^{i theta_i} - e^{i theta_j}|;
/// c1_alpha is (sup|u| + [u]_alpha) + (sup|u'| + [u']_alpha) with u' the
/// spectral derivative.
HolderNormReport holder_norms(const BoundaryTrace& trace, double alpha);
double holder_seminorm(std::span<const cplx> values, double alpha);
double c1_alpha_norm(std::span<const cplx> values, double alpha);

/// Disc (inner radius 0) or annulus q < |z| < 1.
class Domain {
 public:
  static Domain disc() { return Domain(0.0); }
  static Domain annulus(double q);

  bool is_annulus() const noexcept { return q_ > 0.0; }
  double inner_radius() const noexcept { return q_; }
  int component_count() const noexcept { return is_annulus() ? 2 : 1; }

 private:
  explicit Domain(double q) : q_(q) {}
  double q_;
};

/// Holomorphic function reconstructed from boundary traces by the Cauchy
/// integral of the trigonometric interpolants, evaluated exactly mode by mode:
/// f(z) = sum_{k>=0} A_k z^k + sum_{k>=1} B_k (q/z)^k, where A_k are the
/// nonnegative modes of the outer trace and B_k the negative modes of the
/// inner trace.
class HolomorphicExtension {
 public:
  HolomorphicExtension(std::span<const BoundaryTrace> traces, const Domain& domain);

  cplx value(cplx z) const;
  cplx derivative(cplx z) const;
  /// Value and derivative from a single Horner pass.
  std::pair<cplx, cplx> value_and_derivative(cplx z) const;
  /// Highest mode index carrying non-negligible weight (outer or inner part).
  int effective_degree() const noexcept { return degree_; }
  /// Same, for the terms as they appear on the circle |z| = r.
  int degree_at(double r) const;
  /// Values of the extension at the N nodes of the outer (component 0) or
  /// inner (component 1) circle.
  std::vector<cplx> circle_values(int component) const;

  const Domain& domain() const noexcept { return domain_; }
  int node_count() const noexcept { return n_; }

 private:
  Domain domain_;
  int n_;
  std::vector<cplx> outer_;  // A_0 .. A_{N/2-1}
  std::vector<cplx> inner_;  // B_1 .. B_{N/2-1}, stored at index k-1
  // Suffix maxima of log|A_k| and log|B_k|, for truncating sums at a radius.
  std::vector<double> outer_tail_, inner_tail_;
  double log_scale_ = 0.0;
  int degree_ = 0;

  int terms(const std::vector<double>& tail, double log_ratio, double rel) const;
};

/// Cauchy extension at interior points; throws PointTooCloseToBoundary when a
/// point is within 2 pi / N of a boundary circle.
std::vector<cplx> cauchy_extend(std::span<const BoundaryTrace> traces, const Domain& domain,
                                std::span<const cplx> points);

/// Number of zeros inside the domain by the argument principle: the outer
/// winding minus the counterclockwise winding of the inner trace.
int boundary_zero_count(std::span<const BoundaryTrace> traces, const Domain& domain);

struct LocatedZero {
  cplx position;
  int multiplicity = 1;
};

struct ZeroSearchOptions {
  /// Accept a polished zero when |f(position)| < tolerance.
  double tolerance = 1e-8;
  /// Cells holding more than one zero are refined down to this diameter and
  /// then reported as a single zero of the cell's multiplicity.
  double cluster_diameter = 1e-6;
  std::uint64_t seed = 0x5eedu;
  int max_retries = 12;
  int max_depth = 60;
};

/// Recursive subdivision in (log r, theta) with per-cell argument-principle
/// counts, followed by Newton polishing on the holomorphic extension.
std::vector<LocatedZero> locate_zeros(std::span<const BoundaryTrace> traces, const Domain& domain,
                                      const ZeroSearchOptions& opts = {});
std::vector<LocatedZero> locate_zeros(const HolomorphicExtension& f, int expected_count,
                                      const ZeroSearchOptions& opts = {});

/// CSV with header "theta,re,im" and 17 significant digits.
void write_trace_csv(std::ostream& os, const BoundaryTrace& trace);
BoundaryTrace read_trace_csv(std::istream& is);

}  // namespace rhsolve
