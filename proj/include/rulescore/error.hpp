#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rulescore {

enum class ErrorCode {
  ContradictoryRule,
  VacuousRule,
  InvalidRule,
  MissingFeature,
  UnknownFeature,
  EmptyData,
  EmptyInput,
  LengthMismatch,
  DegenerateBaseline,
  FewerThanTwoAlgorithms,
  AllEmpty,
  InvalidWeights,
  InvalidArgument,
  MissingValues,
  UnknownTarget,
  ParseError,
  SchemaError,
  BadK,
  TooSmall,
  InsufficientRows,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rulescore
