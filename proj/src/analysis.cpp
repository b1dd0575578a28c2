#include "rhsolve/analysis.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "rhsolve/errors.hpp"

namespace rhsolve {

HarmonicMeasure::HarmonicMeasure(double q, int component) : q_(q), component_(component) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("annulus modulus must lie in (0, 1)");
  if (component != 0 && component != 1) throw std::invalid_argument("component must be 0 or 1");
}

double HarmonicMeasure::operator()(cplx z) const {
  const double h = std::log(std::abs(z)) / std::log(q_);
  return component_ == 1 ? h : 1.0 - h;
}

namespace {

IdentityReport identity_report(const AnnulusSolution& s, const std::function<double(double)>& r0,
                               const std::function<double(double)>& r1) {
  const BoundaryGrid& grid = s.gamma0.grid();
  std::vector<double> l0(grid.size()), l1(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    l0[j] = std::log(r0(grid.node(j)));
    l1[j] = std::log(r1(grid.node(j)));
  }
  IdentityReport rep;
  rep.lhs = harmonic_extend_annulus(l0, l1, s.q).c_log;
  rep.k1 = s.windings.gamma1_disc;
  rep.k1_coherent = s.windings.gamma1_coherent;
  const HarmonicMeasure h1(s.q);
  rep.rhs = rep.k1;
  for (const LocatedZero& z : s.zeros) {
    const double h = h1(z.position);
    rep.zeros_used.push_back({z.position, z.multiplicity, h});
    rep.rhs += z.multiplicity * h;
  }
  rep.diff = std::abs(rep.lhs - rep.rhs);
  return rep;
}

}  // namespace

IdentityReport check_identity(const AnnulusSolution& s, const TrigPolynomial& r0,
                              const TrigPolynomial& r1) {
  return identity_report(s, r0, r1);
}

IdentityReport check_identity(const AnnulusSolution& s, const CurveFamily& family0,
                              const CurveFamily& family1) {
  const auto p0 = family0.radial_profile(), p1 = family1.radial_profile();
  if (!p0 || !p1) throw NotRadialFamily("identity check needs circles centred at the origin");
  return identity_report(s, *p0, *p1);
}

std::vector<SurjectivityRow> surjectivity_demo(const std::vector<double>& targets, double q,
                                               double psi, int grid) {
  std::vector<SurjectivityRow> rows;
  const HarmonicMeasure h1(q);
  for (double t : targets) {
    if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("targets must lie in [0, 1)");
    const AnnulusSolution s = solve_annulus_radial(TrigPolynomial::constant(1.0),
                                                   TrigPolynomial::constant(std::pow(q, t)), q, psi,
                                                   grid);
    SurjectivityRow row;
    row.target = t;
    double phi = 0.0;
    for (const LocatedZero& z : s.zeros) {
      phi += z.multiplicity * h1(z.position);
      row.zero_count += z.multiplicity;
      row.zero = z.position;
    }
    row.realized = phi - std::floor(phi);
    // distance on the circle R/Z, so 0.9999999 counts as close to 0
    const double d = std::abs(row.realized - t);
    row.error = std::min(d, 1.0 - d);
    rows.push_back(row);
  }
  return rows;
}

MinimalZeroSpec minimal_zero_selector(double s, double q) {
  MinimalZeroSpec m;
  m.k1 = static_cast<int>(std::floor(s));
  const double t = s - m.k1;
  if (t > 0.0) m.zero_radius = std::pow(q, t);
  return m;
}

}  // namespace rhsolve
