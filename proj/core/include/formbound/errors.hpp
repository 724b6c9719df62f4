#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace formbound {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different ambient dimensions, or a point/vector has the wrong length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A form degree falls outside [0, n] or the operation is undefined in that degree.
class DegreeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// (n, k, p) violates the hypothesis under which a norm constant is defined.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A map without polynomial components was handed to an exact-arithmetic routine.
class UnsupportedMapError : public Error {
 public:
  using Error::Error;
};

class NotClosedError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// The optimizer ran out of iterations. Carries the best coefficients found.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_coefficients,
                   double best_energy)
      : Error(what),
        best_coefficients_(std::move(best_coefficients)),
        best_energy_(best_energy) {}

  const std::vector<double>& best_coefficients() const { return best_coefficients_; }
  double best_energy() const { return best_energy_; }

 private:
  std::vector<double> best_coefficients_;
  double best_energy_;
};

}  // namespace formbound
