#pragma once

#include <vector>

namespace rhsolve {

/// Real trigonometric polynomial c0 + sum_k (a_k cos k theta + b_k sin k theta),
/// stored as the flat list [c0, a1, b1, a2, b2, ...].
class TrigPolynomial {
 public:
  TrigPolynomial() : coeffs_{0.0} {}
  explicit TrigPolynomial(std::vector<double> flat);
  static TrigPolynomial constant(double c) { return TrigPolynomial({c}); }

  double operator()(double theta) const;
  double derivative(double theta) const;
  double second_derivative(double theta) const;

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) / 2; }
  bool is_constant() const noexcept;
  double constant_term() const noexcept { return coeffs_[0]; }
  const std::vector<double>& flat() const noexcept { return coeffs_; }
  /// Minimum and maximum over a dense sample (at least 64 points per degree).
  double sampled_min() const;
  double sampled_max() const;

 private:
  double a(int k) const noexcept;
  double b(int k) const noexcept;
  std::vector<double> coeffs_;
};

}  // namespace rhsolve
