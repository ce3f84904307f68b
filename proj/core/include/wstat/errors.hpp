#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wstat {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownFamilyError : public Error {
 public:
  explicit UnknownFamilyError(const std::string& name)
      : Error("unknown density family '" + name + "'") {}
};

/// A probability argument outside the open interval (0, 1).
class InvalidProbabilityError : public Error {
 public:
  using Error::Error;
};

/// Quantile bracket expansion exceeded its bound before straddling the target.
class BracketExpansionError : public Error {
 public:
  using Error::Error;
};

/// Mass or moment integral diverged or failed to converge.
class NonIntegrableError : public Error {
 public:
  using Error::Error;
};

class DegenerateDensityError : public Error {
 public:
  using Error::Error;
};

class EmptySampleError : public Error {
 public:
  EmptySampleError() : Error("sample is empty") {}
};

class SizeMismatchError : public Error {
 public:
  using Error::Error;
};

/// Sample for which the likelihood is unbounded (e.g. all values equal).
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

/// Density vanishes inside its support where 1/p is required.
class SingularDensityError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap. Carries the best point seen.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> best_theta,
                      double best_cost)
      : Error(what), best_theta_(std::move(best_theta)), best_cost_(best_cost) {}

  const std::vector<double>& best_theta() const noexcept { return best_theta_; }
  double best_cost() const noexcept { return best_cost_; }

 private:
  std::vector<double> best_theta_;
  double best_cost_;
};

}  // namespace wstat
