#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace densecode {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

enum class ErrorKind {
  NotNormalized,
  NotSorted,
  NegativeCoefficient,
  InvalidDimension,
  DimensionMismatch,
  InvalidMessageCount,
  InvalidParameter,
  NotUnitary,
  CompletenessViolation,
  LinearDependence,
  BracketViolated,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind);

// Single exception type for all library failures; the kind tells callers
// (and the CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace densecode
