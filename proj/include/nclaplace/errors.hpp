// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nclap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or inconsistent configuration.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the closed parameter interval of a surface.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must hold by construction does not (wrong hbar, broken
/// coordinates, negative radicand beyond rounding).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Classical evaluation at a point where the area density vanishes.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// The operator does not respect the Fourier-offset grading.
class NotRevolutionError : public Error {
 public:
  explicit NotRevolutionError(const std::string& what, double leakage = 0.0)
      : Error(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

/// Every eigenvalue of the metric matrix is below the inversion threshold.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// Iterative eigensolver stopped before all requested pairs converged.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Classical oracle grid cannot separate the requested eigenvalues.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nclap
