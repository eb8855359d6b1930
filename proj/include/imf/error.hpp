#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace imf {

enum class ErrorCode {
  // invalid input
  InvalidArgument,
  NotAPgf,
  NormalizationViolated,
  DegenerateSemigroup,
  NonIntegerPath,
  InvalidCutoffs,
  OutOfRange,
  EmptySample,
  MissingEstimates,
  NonUniformGrid,
  NonIntegerIncrements,
  BlockMisaligned,
  TooFewPoints,
  DegenerateAbscissa,
  PairingMismatch,
  // numerical failures
  IntegrationFailure,
  NotConverged,
  PopulationOverflow,
  MomentDiverges,
  EmbeddingFailure,
  IntensityOverflow,
  HorizonExceeded,
};

std::string_view error_name(ErrorCode code) noexcept;

/// True for codes that describe a numerical failure rather than bad input.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, std::string field = {});

  ErrorCode code() const noexcept { return code_; }
  /// Name of the offending input field, if one is known.
  const std::string& field() const noexcept { return field_; }

private:
  ErrorCode code_;
  std::string field_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message, std::string field = {});

}  // namespace imf
