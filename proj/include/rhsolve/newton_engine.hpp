#pragma once

// Newton iteration through a supplied right inverse, with a sampled
// contraction certificate 4 w1 (w1 + 1)(w2 + 1) w3 < 1.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace rhsolve {

using Vec = std::vector<double>;

struct NewtonProblem {
  /// A(x).
  std::function<Vec(const Vec&)> residual;
  /// B(x) g, a right inverse of DA(x).
  std::function<Vec(const Vec& x, const Vec& g)> right_inverse;
  /// DA(x) v. Central differences of `residual` when empty.
  std::function<Vec(const Vec& x, const Vec& v)> derivative;
  /// Norms; sup norm when empty.
  std::function<double(const Vec&)> iterate_norm;
  std::function<double(const Vec&)> residual_norm;
  /// Random directions for the certificate; i.i.d. normal entries when empty.
  std::function<Vec(std::mt19937_64&)> residual_sampler;
  std::function<Vec(std::mt19937_64&)> iterate_sampler;
};

struct NewtonCertificate {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double product = 0.0;
  bool certified = false;
  std::string method = "sampled";
  /// False once damping has been used in the run the certificate belongs to.
  bool applicable = true;
  /// Set by callers whose linear solves fell back to least squares.
  bool fallback = false;
};

NewtonCertificate make_certificate(double omega1, double omega2, double omega3,
                                   std::string method = "sampled");

struct CertifyOptions {
  std::uint64_t seed = 7;
  int directions = 16;
  int pairs = 8;
  /// Radius of the probe ball; <= 0 picks max(4 w1 w3, 1e-3 (1 + |x0|)).
  double radius = 0.0;
  double fd_step = 1e-6;
};

NewtonCertificate certify(const NewtonProblem& problem, const Vec& x0,
                          const CertifyOptions& opts = {});

struct IterateOptions {
  double tol = 1e-10;
  int max_iter = 40;
  int max_halvings = 6;
  bool compute_certificate = false;
  CertifyOptions certify;
};

struct IterateResult {
  Vec x;
  /// Residual norms, starting with the initial point.
  std::vector<double> history;
  NewtonCertificate certificate;
  bool damped = false;
  int iterations = 0;
};

/// x <- x - lambda B(x) A(x), lambda = 1 unless the residual grows, then
/// halved up to max_halvings times. Throws NoConvergence with the history.
IterateResult iterate(const NewtonProblem& problem, Vec x0, const IterateOptions& opts = {});

double sup_norm(const Vec& v);

}  // namespace rhsolve
