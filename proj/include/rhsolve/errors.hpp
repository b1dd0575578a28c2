#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rhsolve {

/// Base class for all library failures. Each subclass names one failure
/// condition so callers can dispatch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroOnBoundary : public Error {
 public:
  using Error::Error;
};

class UnresolvedPhase : public Error {
 public:
  using Error::Error;
};

class PointTooCloseToBoundary : public Error {
 public:
  using Error::Error;
};

class CountMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroNotEnclosed : public Error {
 public:
  using Error::Error;
};

class DegenerateAxis : public Error {
 public:
  using Error::Error;
};

class EtaWindingNonzero : public Error {
 public:
  EtaWindingNonzero(const std::string& what, int winding)
      : Error(what), winding_(winding) {}
  int winding() const noexcept { return winding_; }

 private:
  int winding_;
};

class ZeroOnTrace : public Error {
 public:
  using Error::Error;
};

class MultiplierVanishes : public Error {
 public:
  using Error::Error;
};

/// Newton iteration exhausted its budget. Carries the residual history.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

class GlueTooCoarse : public Error {
 public:
  GlueTooCoarse(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NeumannDiverges : public Error {
 public:
  using Error::Error;
};

class SamplingFailed : public Error {
 public:
  using Error::Error;
};

class NotRadialFamily : public Error {
 public:
  using Error::Error;
};

class ModeConditioning : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rhsolve
