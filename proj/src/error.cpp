#include "funcint/error.hpp"

namespace funcint {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonMonotonePositions: return "NonMonotonePositions";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedSection: return "MalformedSection";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnsupportedElementType: return "UnsupportedElementType";
    case ErrorCode::DanglingNodeReference: return "DanglingNodeReference";
    case ErrorCode::OrphanNode: return "OrphanNode";
    case ErrorCode::DuplicateConstraint: return "DuplicateConstraint";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::SingularAfterBC: return "SingularAfterBC";
    case ErrorCode::NotAClosedDof: return "NotAClosedDof";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::InvalidChainConfig: return "InvalidChainConfig";
    case ErrorCode::NonFiniteEnergy: return "NonFiniteEnergy";
    case ErrorCode::BondOffMesh: return "BondOffMesh";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(ErrorCode code, std::size_t line, const std::string& message)
    : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace funcint
