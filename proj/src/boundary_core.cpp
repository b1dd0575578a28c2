#include "rhsolve/boundary_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rhsolve/errors.hpp"
#include "rhsolve/fft.hpp"

namespace rhsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double sup_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& z : v) m = std::max(m, std::abs(z));
  return m;
}

std::vector<cplx> to_complex(std::span<const double> v) {
  return std::vector<cplx>(v.begin(), v.end());
}

std::vector<cplx> upsample(std::span<const cplx> values, int factor) {
  return trig_resample(values, static_cast<int>(values.size()) * factor);
}

}  // namespace

std::vector<cplx> trig_resample(std::span<const cplx> values, int m) {
  const int n = static_cast<int>(values.size());
  if (m < n) throw std::invalid_argument("trig_resample only refines");
  if (m == n) return std::vector<cplx>(values.begin(), values.end());
  const TrigCoefficients c = trig_coefficients(values);
  std::vector<cplx> padded(m, cplx{});
  for (int k = c.min_mode(); k < c.max_mode(); ++k) padded[(k % m + m) % m] = c(k);
  const cplx nyq = c(n / 2);
  padded[n / 2] += 0.5 * nyq;
  padded[m - n / 2] += 0.5 * nyq;
  return fft::backward(padded);
}

BoundaryGrid::BoundaryGrid(int node_count) : n_(node_count) {
  if (node_count < 16 || !is_power_of_two(node_count))
    throw std::invalid_argument("grid size must be a power of two >= 16, got " +
                                std::to_string(node_count));
}

double BoundaryGrid::node(int j) const noexcept { return kTwoPi * j / n_; }

std::vector<double> BoundaryGrid::nodes() const {
  std::vector<double> t(n_);
  for (int j = 0; j < n_; ++j) t[j] = node(j);
  return t;
}

BoundaryTrace::BoundaryTrace(BoundaryGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw std::invalid_argument("trace length does not match grid");
  for (const cplx& z : values_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("trace contains non-finite values");
}

BoundaryTrace BoundaryTrace::from_real(BoundaryGrid grid, std::span<const double> values) {
  return BoundaryTrace(grid, to_complex(values));
}

BoundaryTrace BoundaryTrace::sample(BoundaryGrid grid, const std::function<cplx(double)>& f) {
  std::vector<cplx> v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = f(grid.node(j));
  return BoundaryTrace(grid, std::move(v));
}

std::vector<double> BoundaryTrace::real_part() const {
  std::vector<double> r(values_.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = values_[j].real();
  return r;
}

std::vector<double> BoundaryTrace::imag_part() const {
  std::vector<double> r(values_.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = values_[j].imag();
  return r;
}

bool BoundaryTrace::is_real(double tol) const {
  const double scale = std::max(1.0, sup_abs(values_));
  for (const cplx& z : values_)
    if (std::abs(z.imag()) > tol * scale) return false;
  return true;
}

TrigCoefficients::TrigCoefficients(int node_count) : n_(node_count), c_(node_count) {}

TrigCoefficients::TrigCoefficients(int node_count, std::vector<cplx> fft_ordered)
    : n_(node_count), c_(std::move(fft_ordered)) {
  if (static_cast<int>(c_.size()) != n_)
    throw std::invalid_argument("coefficient count does not match node count");
}

int TrigCoefficients::slot(int k) const { return k >= 0 ? k : k + n_; }

cplx TrigCoefficients::operator()(int k) const {
  if (k < min_mode() || k > max_mode()) return {};
  return c_[slot(k)];
}

cplx& TrigCoefficients::at(int k) {
  if (k < min_mode() || k > max_mode())
    throw std::out_of_range("mode " + std::to_string(k) + " outside (-N/2, N/2]");
  return c_[slot(k)];
}

TrigCoefficients trig_coefficients(std::span<const cplx> values) {
  const int n = static_cast<int>(values.size());
  std::vector<cplx> c = fft::forward(values);
  const double inv = 1.0 / n;
  for (cplx& z : c) z *= inv;
  return TrigCoefficients(n, std::move(c));
}

TrigCoefficients trig_coefficients(const BoundaryTrace& trace) {
  return trig_coefficients(trace.values());
}

std::vector<cplx> trig_synthesize(const TrigCoefficients& coeffs) {
  return fft::backward(coeffs.fft_ordered());
}

cplx trig_evaluate(const TrigCoefficients& c, double theta) {
  cplx s{};
  for (int k = c.min_mode(); k < c.max_mode(); ++k) s += c(k) * std::polar(1.0, k * theta);
  s += c(c.max_mode()) * std::cos(c.max_mode() * theta);
  return s;
}

cplx trig_evaluate_derivative(const TrigCoefficients& c, double theta) {
  cplx s{};
  for (int k = c.min_mode(); k < c.max_mode(); ++k)
    s += cplx(0.0, k) * c(k) * std::polar(1.0, k * theta);
  const int m = c.max_mode();
  s -= c(m) * (m * std::sin(m * theta));
  return s;
}

std::vector<double> hilbert_transform(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  const std::vector<cplx> z = to_complex(values);
  std::vector<cplx> c = fft::forward(z);
  c[0] = 0.0;
  c[n / 2] = 0.0;
  const cplx mi(0.0, -1.0);
  for (int k = 1; k < n / 2; ++k) {
    c[k] *= mi;        // mode +k
    c[n - k] *= -mi;   // mode -k
  }
  const std::vector<cplx> out = fft::backward(c);
  std::vector<double> r(n);
  for (int j = 0; j < n; ++j) r[j] = out[j].real() / n;
  return r;
}

BoundaryTrace hilbert_transform(const BoundaryTrace& trace) {
  if (!trace.is_real(1e-12))
    throw std::invalid_argument("hilbert_transform requires a real-valued trace");
  const std::vector<double> re = trace.real_part();
  return BoundaryTrace::from_real(trace.grid(), hilbert_transform(re));
}

std::vector<cplx> analytic_projection(std::span<const cplx> values) {
  const int n = static_cast<int>(values.size());
  std::vector<cplx> c = fft::forward(values);
  for (int k = n / 2; k < n; ++k) c[k] = 0.0;
  std::vector<cplx> out = fft::backward(c);
  for (cplx& z : out) z /= n;
  return out;
}

double negative_mode_leakage(std::span<const cplx> values) {
  const TrigCoefficients c = trig_coefficients(values);
  double all = 0.0, neg = 0.0;
  for (int k = c.min_mode(); k <= c.max_mode(); ++k) {
    all = std::max(all, std::abs(c(k)));
    if (k < 0) neg = std::max(neg, std::abs(c(k)));
  }
  return all == 0.0 ? 0.0 : neg / all;
}

std::vector<cplx> spectral_derivative(std::span<const cplx> values) {
  const int n = static_cast<int>(values.size());
  std::vector<cplx> c = fft::forward(values);
  for (int k = 0; k < n; ++k) {
    const int mode = k <= n / 2 ? k : k - n;
    c[k] *= (k == n / 2) ? cplx{} : cplx(0.0, mode) / static_cast<double>(n);
  }
  return fft::backward(c);
}

std::vector<double> spectral_derivative(std::span<const double> values) {
  const std::vector<cplx> d = spectral_derivative(std::span<const cplx>(to_complex(values)));
  std::vector<double> r(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) r[j] = d[j].real();
  return r;
}

WindingReport winding_report(const BoundaryTrace& trace, const WindingOptions& opts) {
  const auto v = trace.values();
  const int n = trace.size();
  double lo = std::abs(v[0]), hi = lo;
  for (const cplx& z : v) {
    lo = std::min(lo, std::abs(z));
    hi = std::max(hi, std::abs(z));
  }
  if (hi == 0.0 || lo < opts.zero_floor * hi)
    throw ZeroOnBoundary("trace vanishes on the boundary (min |f| = " + std::to_string(lo) + ")");

  double total = 0.0;
  for (int j = 0; j < n; ++j) total += std::arg(v[(j + 1) % n] / v[j]);
  WindingReport rep;
  const double turns = total / kTwoPi;
  rep.winding = static_cast<int>(std::lround(turns));
  rep.residue = std::abs(turns - rep.winding);
  rep.min_modulus = lo;

  if (opts.refine > 1) {
    const std::vector<cplx> fine = upsample(v, opts.refine);
    const int m = static_cast<int>(fine.size());
    double fine_total = 0.0, max_jump = 0.0;
    for (int j = 0; j < m; ++j) {
      const cplx a = fine[j], b = fine[(j + 1) % m];
      if (a == 0.0 || b == 0.0) throw UnresolvedPhase("interpolant vanishes between nodes");
      const double d = std::arg(b / a);
      fine_total += d;
      max_jump = std::max(max_jump, std::abs(d));
    }
    const long fine_winding = std::lround(fine_total / kTwoPi);
    if (fine_winding != rep.winding || max_jump >= 0.5 * std::numbers::pi)
      throw UnresolvedPhase("phase increments not resolved by the grid (N = " +
                            std::to_string(n) + ")");
  }
  if (rep.residue >= 0.1) throw UnresolvedPhase("winding residue too large");
  return rep;
}

int winding_number(const BoundaryTrace& trace, const WindingOptions& opts) {
  return winding_report(trace, opts).winding;
}

double holder_seminorm(std::span<const cplx> v, double alpha) {
  const int n = static_cast<int>(v.size());
  if (n < 2) return 0.0;
  // Chord distance |e^{i theta_i} - e^{i theta_j}| depends only on the index gap.
  std::vector<double> inv_d(n);
  for (int g = 1; g < n; ++g)
    inv_d[g] = std::pow(2.0 * std::sin(std::numbers::pi * std::min(g, n - g) / n), -alpha);
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) best = std::max(best, std::abs(v[i] - v[j]) * inv_d[j - i]);
  return best;
}

double c1_alpha_norm(std::span<const cplx> v, double alpha) {
  const std::vector<cplx> d = spectral_derivative(v);
  return sup_abs(v) + holder_seminorm(v, alpha) + sup_abs(d) + holder_seminorm(d, alpha);
}

HolderNormReport holder_norms(const BoundaryTrace& trace, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  HolderNormReport r;
  r.alpha = alpha;
  r.sup_norm = sup_abs(trace.values());
  r.c_alpha = holder_seminorm(trace.values(), alpha);
  r.c1_alpha = c1_alpha_norm(trace.values(), alpha);
  return r;
}

Domain Domain::annulus(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("annulus modulus must lie in (0,1)");
  return Domain(q);
}

HolomorphicExtension::HolomorphicExtension(std::span<const BoundaryTrace> traces,
                                           const Domain& domain)
    : domain_(domain) {
  if (static_cast<int>(traces.size()) != domain.component_count())
    throw std::invalid_argument("one trace per boundary circle required");
  n_ = traces[0].size();
  const int half = n_ / 2;
  const TrigCoefficients c0 = trig_coefficients(traces[0]);
  outer_.resize(half);
  for (int k = 0; k < half; ++k) outer_[k] = c0(k);
  if (domain.is_annulus()) {
    if (traces[1].size() != n_) throw std::invalid_argument("traces must share a grid");
    const TrigCoefficients c1 = trig_coefficients(traces[1]);
    inner_.resize(half - 1);
    for (int k = 1; k < half; ++k) inner_[k - 1] = c1(-k);
  }
  double scale = 0.0;
  for (const cplx& a : outer_) scale = std::max(scale, std::abs(a));
  for (const cplx& b : inner_) scale = std::max(scale, std::abs(b));
  for (int k = 0; k < half; ++k)
    if (std::abs(outer_[k]) > 1e-14 * scale) degree_ = std::max(degree_, k);
  for (int k = 1; k <= static_cast<int>(inner_.size()); ++k)
    if (std::abs(inner_[k - 1]) > 1e-14 * scale) degree_ = std::max(degree_, k);
  log_scale_ = std::log(scale);
  const auto suffix_max = [](const std::vector<cplx>& c) {
    std::vector<double> t(c.size() + 1, -std::numeric_limits<double>::infinity());
    for (std::size_t k = c.size(); k-- > 0;) t[k] = std::max(t[k + 1], std::log(std::abs(c[k])));
    return t;
  };
  outer_tail_ = suffix_max(outer_);
  inner_tail_ = suffix_max(inner_);
}

// Smallest K with |c_k| ratio^k below rel * scale for every k >= K.
int HolomorphicExtension::terms(const std::vector<double>& tail, double log_ratio,
                                double rel) const {
  const int size = static_cast<int>(tail.size()) - 1;
  if (!(log_ratio < 0.0)) return size;
  const double bound = log_scale_ + std::log(rel);
  int lo = 0, hi = size;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (tail[mid] + mid * log_ratio < bound) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

int HolomorphicExtension::degree_at(double r) const {
  int d = terms(outer_tail_, std::log(r), 1e-14) - 1;
  if (!inner_.empty()) d = std::max(d, terms(inner_tail_, std::log(domain_.inner_radius() / r), 1e-14));
  return std::max(d, 0);
}

std::vector<cplx> HolomorphicExtension::circle_values(int component) const {
  const double q = domain_.inner_radius();
  std::vector<cplx> c(n_);
  for (std::size_t k = 0; k < outer_.size(); ++k)
    c[k] = component == 0 ? outer_[k] : outer_[k] * std::pow(q, double(k));
  for (std::size_t k = 1; k <= inner_.size(); ++k)
    c[n_ - k] = component == 0 ? inner_[k - 1] * std::pow(q, double(k)) : inner_[k - 1];
  return fft::backward(c);
}

std::pair<cplx, cplx> HolomorphicExtension::value_and_derivative(cplx z) const {
  // Terms below 1e-18 of the largest coefficient at this radius are dropped.
  const double r = std::abs(z);
  cplx p{}, dp{};
  for (int k = terms(outer_tail_, std::log(r), 1e-18) - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + outer_[k];
  }
  if (inner_.empty()) return {p, dp};
  const double q = domain_.inner_radius();
  const cplx w = q / z;
  // Q(w) = sum_{k>=1} B_k w^k; d/dz Q(q/z) = Q'(w) * (-w / z).
  cplx s{}, ds{};
  for (int k = terms(inner_tail_, std::log(q / r), 1e-18); k >= 1; --k) {
    ds = ds * w + s;
    s = s * w + inner_[k - 1];
  }
  const cplx qv = s * w;
  const cplx dq = (ds * w + s);
  return {p + qv, dp - dq * w / z};
}

cplx HolomorphicExtension::value(cplx z) const { return value_and_derivative(z).first; }
cplx HolomorphicExtension::derivative(cplx z) const { return value_and_derivative(z).second; }

std::vector<cplx> cauchy_extend(std::span<const BoundaryTrace> traces, const Domain& domain,
                                std::span<const cplx> points) {
  const HolomorphicExtension f(traces, domain);
  const double margin = kTwoPi / f.node_count();
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const cplx& z : points) {
    const double r = std::abs(z);
    const bool outside = r > 1.0 - margin || (domain.is_annulus() && r < domain.inner_radius() + margin);
    if (outside) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "point (%.6g, %.6g) within 2pi/N of the boundary", z.real(),
                    z.imag());
      throw PointTooCloseToBoundary(buf);
    }
    out.push_back(f.value(z));
  }
  return out;
}

int boundary_zero_count(std::span<const BoundaryTrace> traces, const Domain& domain) {
  if (static_cast<int>(traces.size()) != domain.component_count())
    throw std::invalid_argument("one trace per boundary circle required");
  int count = winding_number(traces[0]);
  if (domain.is_annulus()) count -= winding_number(traces[1]);
  return count;
}

void write_trace_csv(std::ostream& os, const BoundaryTrace& trace) {
  os << "theta,re,im\n";
  char buf[128];
  for (int j = 0; j < trace.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", trace.grid().node(j), trace[j].real(),
                  trace[j].imag());
    os << buf;
  }
}

BoundaryTrace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("theta,re,im", 0) != 0)
    throw std::invalid_argument("trace CSV must start with header theta,re,im");
  std::vector<cplx> v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string t, re, im;
    if (!std::getline(ls, t, ',') || !std::getline(ls, re, ',') || !std::getline(ls, im))
      throw std::invalid_argument("malformed trace CSV row: " + line);
    v.emplace_back(std::stod(re), std::stod(im));
  }
  const BoundaryGrid grid(static_cast<int>(v.size()));
  return BoundaryTrace(grid, std::move(v));
}

}  // namespace rhsolve
