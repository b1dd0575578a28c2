#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "rhsolve/boundary_core.hpp"
#include "rhsolve/errors.hpp"

namespace rhsolve {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// A cell is either a centred disc |z| < r1 (disc domains only) or a polar
// sector r0 <= |z| <= r1, t0 <= arg z <= t1.
struct Cell {
  bool disc = false;
  double r0 = 0.0, r1 = 0.0, t0 = 0.0, t1 = 0.0;
  int count = 0;
  int depth = 0;

  cplx center() const {
    if (disc) return 0.0;
    return std::polar(std::sqrt(r0 * r1), 0.5 * (t0 + t1));
  }
  double diameter() const {
    if (disc || t1 - t0 >= kPi) return 2.0 * r1;
    const cplx a = std::polar(r1, t0), b = std::polar(r0, t1), c = std::polar(r1, t1);
    return std::max({std::abs(a - b), std::abs(a - c), r1 - r0});
  }
};

class Locator {
 public:
  Locator(const HolomorphicExtension& f, const ZeroSearchOptions& opts)
      : f_(f), opts_(opts), rng_(opts.seed) {
    outer_ = f.circle_values(0);
    if (f.domain().is_annulus()) inner_ = f.circle_values(1);
  }

  std::vector<LocatedZero> run(int expected) {
    std::vector<LocatedZero> out;
    if (expected < 0) throw CountMismatch("negative argument-principle count");
    if (expected == 0) return out;
    const double q = f_.domain().inner_radius();
    std::vector<Cell> top;
    for (int attempt = 0;; ++attempt) {
      top = top_cells(q, attempt);
      int sum = 0;
      bool ok = true;
      for (Cell& c : top) {
        const auto n = count(c);
        if (!n) {
          ok = false;
          break;
        }
        c.count = *n;
        sum += *n;
      }
      if (ok && sum == expected) break;
      if (attempt >= opts_.max_retries)
        throw CountMismatch("top-level cell counts do not reproduce the boundary count " +
                            std::to_string(expected));
    }
    for (const Cell& c : top)
      if (c.count > 0) refine(c, out);
    int total = 0;
    for (const auto& z : out) total += z.multiplicity;
    if (total != expected) throw CountMismatch("located multiplicities do not sum to the count");
    std::sort(out.begin(), out.end(), [](const LocatedZero& a, const LocatedZero& b) {
      if (a.position.real() != b.position.real()) return a.position.real() < b.position.real();
      return a.position.imag() < b.position.imag();
    });
    return out;
  }

 private:
  double jitter() { return std::uniform_real_distribution<double>(-0.1, 0.1)(rng_); }

  std::vector<Cell> top_cells(double q, int attempt) {
    const double t0 = attempt == 0 ? 0.0 : jitter();
    std::vector<Cell> cells;
    double r0 = q;
    if (q == 0.0) {
      Cell d;
      d.disc = true;
      d.r1 = 0.5 * (1.0 + (attempt == 0 ? 0.0 : jitter()));
      cells.push_back(d);
      r0 = d.r1;
    }
    for (int s = 0; s < 4; ++s) {
      Cell c;
      c.r0 = r0;
      c.r1 = 1.0;
      c.t0 = t0 + s * 0.5 * kPi;
      c.t1 = t0 + (s + 1) * 0.5 * kPi;
      cells.push_back(c);
    }
    return cells;
  }

  // Argument increment of f along z(s), s in [0,1]; nullopt when a zero is
  // (numerically) on the path.
  int rate(double r) const { return std::max(f_.degree_at(r), 4); }

  template <class Path>
  std::optional<double> edge_increment(const Path& z, double length, int rate) {
    const int pieces = std::max(4, static_cast<int>(std::ceil(2.0 * rate * length)));
    double total = 0.0;
    cplx prev_z = z(0.0);
    auto [pf, pd] = f_.value_and_derivative(prev_z);
    const double seg = length / pieces;
    if (hit(pf, pd, seg)) return std::nullopt;
    for (int i = 1; i <= pieces; ++i) {
      const double s0 = double(i - 1) / pieces, s1 = double(i) / pieces;
      auto inc = piece(z, s0, s1, pf, seg, 0);
      if (!inc) return std::nullopt;
      total += *inc;
      pf = f_.value(z(s1));
    }
    return total;
  }

  template <class Path>
  std::optional<double> piece(const Path& z, double s0, double s1, cplx f0, double seg,
                              int depth) {
    const auto [f1, d1] = f_.value_and_derivative(z(s1));
    if (hit(f1, d1, seg)) return std::nullopt;
    if (f0 == 0.0) return std::nullopt;
    const double d = std::arg(f1 / f0);
    if (std::abs(d) <= 0.25 * kPi) return d;
    if (depth > 40) return std::nullopt;
    const double sm = 0.5 * (s0 + s1);
    const cplx fm = f_.value(z(sm));
    auto a = piece(z, s0, sm, f0, 0.5 * seg, depth + 1);
    if (!a) return std::nullopt;
    auto b = piece(z, sm, s1, fm, 0.5 * seg, depth + 1);
    if (!b) return std::nullopt;
    return *a + *b;
  }

  // Argument increment along the boundary circle of radius r from angle ta to
  // tb, read off the node values; nullopt if the nodes do not resolve it.
  std::optional<double> boundary_arc(const std::vector<cplx>& v, double r, double ta, double tb) {
    const int n = static_cast<int>(v.size());
    const double lo = std::min(ta, tb), hi = std::max(ta, tb);
    const double h = kTwoPi / n;
    cplx prev = f_.value(std::polar(r, lo));
    double total = 0.0;
    const auto step = [&](cplx next) {
      if (prev == 0.0 || next == 0.0) return false;
      const double d = std::arg(next / prev);
      if (std::abs(d) > 0.25 * kPi) return false;
      total += d;
      prev = next;
      return true;
    };
    for (long j = static_cast<long>(std::floor(lo / h)) + 1; j * h < hi; ++j)
      if (!step(v[((j % n) + n) % n])) return std::nullopt;
    if (!step(f_.value(std::polar(r, hi)))) return std::nullopt;
    return ta <= tb ? total : -total;
  }

  template <class Path>
  std::optional<double> arc_increment(double r, double ta, double tb, const Path& z) {
    const std::vector<cplx>* v = r == 1.0 ? &outer_ : (!inner_.empty() && r == f_.domain().inner_radius() ? &inner_ : nullptr);
    if (v) {
      if (auto inc = boundary_arc(*v, r, ta, tb)) return inc;
    }
    return edge_increment(z, r * std::abs(tb - ta), rate(r));
  }

  static bool hit(cplx fv, cplx dv, double seg) {
    return std::abs(fv) == 0.0 || std::abs(fv) < 1e-3 * seg * std::abs(dv);
  }

  std::optional<int> count(const Cell& c) {
    double total = 0.0;
    if (c.disc) {
      const double r = c.r1;
      auto inc = edge_increment([&](double s) { return std::polar(r, kTwoPi * s); }, kTwoPi * r, rate(r));
      if (!inc) return std::nullopt;
      total = *inc;
    } else {
      const double r0 = c.r0, r1 = c.r1, t0 = c.t0, t1 = c.t1;
      const double span = t1 - t0;
      const double lr0 = std::log(r0), lr1 = std::log(r1);
      const int radial_rate = std::max(rate(r0), rate(r1));
      auto a = arc_increment(r1, t0, t1, [&](double s) { return std::polar(r1, t0 + span * s); });
      if (!a) return std::nullopt;
      auto b = edge_increment(
          [&](double s) { return std::polar(std::exp(lr1 + (lr0 - lr1) * s), t1); }, r1 - r0,
          radial_rate);
      if (!b) return std::nullopt;
      auto cc = arc_increment(r0, t1, t0, [&](double s) { return std::polar(r0, t1 - span * s); });
      if (!cc) return std::nullopt;
      auto d = edge_increment(
          [&](double s) { return std::polar(std::exp(lr0 + (lr1 - lr0) * s), t0); }, r1 - r0,
          radial_rate);
      if (!d) return std::nullopt;
      total = *a + *b + *cc + *d;
    }
    const double turns = total / kTwoPi;
    const long n = std::lround(turns);
    if (std::abs(turns - n) > 0.05 || n < 0) return std::nullopt;
    return static_cast<int>(n);
  }

  std::vector<Cell> split(const Cell& c, bool jittered) {
    const double u = 0.5 + (jittered ? jitter() : 0.0);
    std::vector<Cell> kids;
    if (c.disc) {
      Cell inner = c;
      inner.r1 = c.r1 * u;
      kids.push_back(inner);
      const double t0 = jittered ? jitter() : 0.0;
      for (int s = 0; s < 4; ++s) {
        Cell k;
        k.r0 = inner.r1;
        k.r1 = c.r1;
        k.t0 = t0 + s * 0.5 * kPi;
        k.t1 = t0 + (s + 1) * 0.5 * kPi;
        kids.push_back(k);
      }
    } else {
      const double radial = c.r1 - c.r0;
      const double arc = 0.5 * (c.r0 + c.r1) * (c.t1 - c.t0);
      Cell a = c, b = c;
      if (radial >= arc) {
        const double lm = std::log(c.r0) + u * (std::log(c.r1) - std::log(c.r0));
        a.r1 = b.r0 = std::exp(lm);
      } else {
        a.t1 = b.t0 = c.t0 + u * (c.t1 - c.t0);
      }
      kids = {a, b};
    }
    for (Cell& k : kids) k.depth = c.depth + 1;
    return kids;
  }

  bool polish(const Cell& c, std::vector<LocatedZero>& out) {
    const cplx z0 = c.center();
    const double radius = c.diameter();
    cplx z = z0;
    for (int it = 0; it < 60; ++it) {
      const auto [fv, dv] = f_.value_and_derivative(z);
      if (dv == 0.0) break;
      const cplx step = double(c.count) * fv / dv;
      z -= step;
      if (std::abs(z - z0) > radius) break;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (std::abs(z - z0) <= radius && std::abs(f_.value(z)) < opts_.tolerance) {
      out.push_back({z, c.count});
      return true;
    }
    if (c.count > 1 && std::abs(f_.value(z0)) < opts_.tolerance) {
      out.push_back({z0, c.count});
      return true;
    }
    return false;
  }

  void refine(const Cell& c, std::vector<LocatedZero>& out) {
    const double diam = c.diameter();
    const bool small = c.count == 1 ? diam < 0.05 : diam < opts_.cluster_diameter;
    if (small && polish(c, out)) return;
    if (c.depth >= opts_.max_depth) {
      if (polish(c, out)) return;
      throw CountMismatch("zero refinement exhausted its depth budget");
    }
    for (int attempt = 0;; ++attempt) {
      std::vector<Cell> kids = split(c, attempt > 0);
      int sum = 0;
      bool ok = true;
      for (Cell& k : kids) {
        const auto n = count(k);
        if (!n) {
          ok = false;
          break;
        }
        k.count = *n;
        sum += *n;
      }
      if (ok && sum == c.count) {
        for (const Cell& k : kids)
          if (k.count > 0) refine(k, out);
        return;
      }
      if (attempt >= opts_.max_retries)
        throw CountMismatch("subdivision lost zeros after " + std::to_string(attempt + 1) +
                            " jittered attempts");
    }
  }

  const HolomorphicExtension& f_;
  ZeroSearchOptions opts_;
  std::mt19937_64 rng_;
  std::vector<cplx> outer_, inner_;
};

}  // namespace

std::vector<LocatedZero> locate_zeros(const HolomorphicExtension& f, int expected_count,
                                      const ZeroSearchOptions& opts) {
  Locator loc(f, opts);
  return loc.run(expected_count);
}

std::vector<LocatedZero> locate_zeros(std::span<const BoundaryTrace> traces, const Domain& domain,
                                      const ZeroSearchOptions& opts) {
  const int expected = boundary_zero_count(traces, domain);
  const HolomorphicExtension f(traces, domain);
  return locate_zeros(f, expected, opts);
}

}  // namespace rhsolve
