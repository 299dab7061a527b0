#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chids {

enum class ErrorCode {
  FieldCountMismatch,
  NumericParseError,
  UnknownNominalSymbol,
  UnknownLabel,
  ParseErrors,
  IoError,
  InfeasibleSplit,
  UnknownFeatureName,
  SchemaMismatch,
  UnorderedStream,
  UnknownScenario,
  InvalidConfig,
  EmptyTestSet,
  SinkUnavailable,
  MissingArtifact,
  FormatError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chids
