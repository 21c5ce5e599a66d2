#pragma once

#include <stdexcept>
#include <string>

namespace aptsim {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, configs, or basis mismatches (CLI exit code 1).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the regime a closed form is valid in, e.g. Gamma <= g*eps
/// for the unbroken-regime transfer matrix, or n_pump <= n_fund for QPM.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during propagation (CLI exit code 2).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A 0/0 correlation ratio. Raised instead of returning NaN so sweep
/// post-processing cannot silently propagate garbage.
class UndefinedObservableError : public Error {
 public:
  using Error::Error;
};

/// Calibration data that cannot identify the fit parameters.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace aptsim
