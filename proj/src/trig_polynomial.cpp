#include "rhsolve/trig_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rhsolve {

TrigPolynomial::TrigPolynomial(std::vector<double> flat) : coeffs_(std::move(flat)) {
  if (coeffs_.empty()) throw std::invalid_argument("trig polynomial needs a constant term");
  if (coeffs_.size() % 2 == 0) coeffs_.push_back(0.0);  // trailing cosine without sine
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite trig coefficient");
}

double TrigPolynomial::a(int k) const noexcept { return coeffs_[2 * k - 1]; }
double TrigPolynomial::b(int k) const noexcept { return coeffs_[2 * k]; }

double TrigPolynomial::operator()(double t) const {
  double s = coeffs_[0];
  for (int k = 1; k <= degree(); ++k) s += a(k) * std::cos(k * t) + b(k) * std::sin(k * t);
  return s;
}

double TrigPolynomial::derivative(double t) const {
  double s = 0.0;
  for (int k = 1; k <= degree(); ++k) s += k * (-a(k) * std::sin(k * t) + b(k) * std::cos(k * t));
  return s;
}

double TrigPolynomial::second_derivative(double t) const {
  double s = 0.0;
  for (int k = 1; k <= degree(); ++k)
    s -= double(k) * k * (a(k) * std::cos(k * t) + b(k) * std::sin(k * t));
  return s;
}

bool TrigPolynomial::is_constant() const noexcept {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

double TrigPolynomial::sampled_min() const {
  const int m = 64 * std::max(1, degree());
  double lo = (*this)(0.0);
  for (int j = 1; j < m; ++j) lo = std::min(lo, (*this)(2.0 * std::numbers::pi * j / m));
  return lo;
}

double TrigPolynomial::sampled_max() const {
  const int m = 64 * std::max(1, degree());
  double hi = (*this)(0.0);
  for (int j = 1; j < m; ++j) hi = std::max(hi, (*this)(2.0 * std::numbers::pi * j / m));
  return hi;
}

}  // namespace rhsolve
