#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tfloc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated (mismatched grids, bad sizes).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Mass of a window or atom left the finite signal grid.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A sampled function oscillates faster than the grid resolves.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A domain (or its assembly margin) does not fit inside its plane grid.
class MarginViolation : public Error {
 public:
  using Error::Error;
};

/// Plane grid does not cover the support of a normalized field.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver output failed its residual or orthonormality certificate.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// A run would exceed the configured matrix-dimension cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Collects non-fatal warnings emitted by an operation.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const { return warnings.empty(); }
};

}  // namespace tfloc
