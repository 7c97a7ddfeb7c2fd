#pragma once

#include <stdexcept>
#include <string>

namespace phaseless {

/// Base class of every error raised by the library. The CLI maps all of
/// these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the supported range of a special function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a kernel singularity (coincident source and target).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Point inside or on a scatterer, or a measurement set that violates its
/// placement invariants.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Singular or badly conditioned discretized system.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver that stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double final_residual)
      : Error(what), final_residual_(final_residual) {}
  double final_residual() const noexcept { return final_residual_; }

 private:
  double final_residual_;
};

/// Malformed scene, dataset, or raster file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Relative phases could not be continued along the direction grid.
class ContinuationError : public Error {
 public:
  using Error::Error;
};

/// The radiating-extension fit for the anchor phase failed.
class AnchoringError : public Error {
 public:
  using Error::Error;
};

/// Neither phase branch was preferred by the required margin.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, double residual_plus, double residual_minus)
      : Error(what), residual_plus_(residual_plus), residual_minus_(residual_minus) {}
  double residual_plus() const noexcept { return residual_plus_; }
  double residual_minus() const noexcept { return residual_minus_; }

 private:
  double residual_plus_;
  double residual_minus_;
};

}  // namespace phaseless
