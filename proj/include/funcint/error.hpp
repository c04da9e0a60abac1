#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace funcint {

enum class ErrorCode {
  // mesh
  NonMonotonePositions,
  TooFewNodes,
  MalformedHeader,
  MalformedSection,
  UnsupportedVersion,
  UnsupportedElementType,
  DanglingNodeReference,
  OrphanNode,
  DuplicateConstraint,
  UnknownNode,
  // elements
  NonPositiveLength,
  DegenerateTriangle,
  // assembly / linear algebra
  SingularAfterBC,
  NotAClosedDof,
  DimensionMismatch,
  NotPositiveDefinite,
  NonSymmetric,
  PointOutsideDomain,
  // sampler
  EmptyChain,
  InvalidChainConfig,
  NonFiniteEnergy,
  // models
  BondOffMesh,
  InvalidParameter,
};

std::string_view to_string(ErrorCode code);

/// Every library failure is reported through this type; `code()` identifies the
/// failure class and `what()` carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// MSH reader failure with the 1-based line where it was detected.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace funcint
