#include "chids/error.hpp"

namespace chids {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FieldCountMismatch: return "FieldCountMismatch";
    case ErrorCode::NumericParseError: return "NumericParseError";
    case ErrorCode::UnknownNominalSymbol: return "UnknownNominalSymbol";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ParseErrors: return "ParseErrors";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InfeasibleSplit: return "InfeasibleSplit";
    case ErrorCode::UnknownFeatureName: return "UnknownFeatureName";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnorderedStream: return "UnorderedStream";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
    case ErrorCode::SinkUnavailable: return "SinkUnavailable";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace chids
