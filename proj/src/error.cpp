#include "landauer/error.hpp"

namespace landauer {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NonFiniteFunctionValue: return "NonFiniteFunctionValue";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::SingularReference: return "SingularReference";
    case ErrorCode::UnnormalizedVector: return "UnnormalizedVector";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::ConstantEntropy: return "ConstantEntropy";
    case ErrorCode::ProtocolDomainError: return "ProtocolDomainError";
    case ErrorCode::StabilityError: return "StabilityError";
    case ErrorCode::PositivityError: return "PositivityError";
    case ErrorCode::DrivenModelSupplied: return "DrivenModelSupplied";
    case ErrorCode::MisalignedSeries: return "MisalignedSeries";
    case ErrorCode::NoBathTemperature: return "NoBathTemperature";
    case ErrorCode::DarkStateViolation: return "DarkStateViolation";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace landauer
