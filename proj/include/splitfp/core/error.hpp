#pragma once

#include <stdexcept>
#include <string>

namespace splitfp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Bad parameters, bad configuration, class/family mismatch.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An iterate left the domain of a non-self map.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// NaN/inf produced, infeasible cut set, inconsistent adjoint.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

// Iterative routine hit its budget. Carries the best value seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const { return best_estimate_; }

 private:
  double best_estimate_;
};

class InfeasibleError : public NumericalBreakdown {
 public:
  InfeasibleError(const std::string& what, double gap) : NumericalBreakdown(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

}  // namespace splitfp
