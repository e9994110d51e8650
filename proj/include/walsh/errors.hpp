#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace walsh {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A point lies in a forbidden region (inside the model set, inside the
// pre-image, at a pole of an integrand, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iteration failed to converge. Carries the best iterate seen and its
// residual so callers can diagnose near-misses.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::vector<std::complex<double>> best,
                   double residual)
      : Error(msg), best_iterate(std::move(best)), residual(residual) {}

  std::vector<std::complex<double>> best_iterate;
  double residual = 0.0;
};

// The configuration is degenerate for the method: a critical value sits on
// the model-set boundary, components touch, a tracked root collides, ...
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// A quadrature or continuation did not reach the requested accuracy.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// No closed-form family matches the input.
class DispatchError : public Error {
 public:
  using Error::Error;
};

// More than one candidate branch validated; the result would be ambiguous.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

}  // namespace walsh
