#include "imf/error.hpp"

namespace imf {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotAPgf: return "NotAPgf";
    case ErrorCode::NormalizationViolated: return "NormalizationViolated";
    case ErrorCode::DegenerateSemigroup: return "DegenerateSemigroup";
    case ErrorCode::NonIntegerPath: return "NonIntegerPath";
    case ErrorCode::InvalidCutoffs: return "InvalidCutoffs";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::MissingEstimates: return "MissingEstimates";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::NonIntegerIncrements: return "NonIntegerIncrements";
    case ErrorCode::BlockMisaligned: return "BlockMisaligned";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateAbscissa: return "DegenerateAbscissa";
    case ErrorCode::PairingMismatch: return "PairingMismatch";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::PopulationOverflow: return "PopulationOverflow";
    case ErrorCode::MomentDiverges: return "MomentDiverges";
    case ErrorCode::EmbeddingFailure: return "EmbeddingFailure";
    case ErrorCode::IntensityOverflow: return "IntensityOverflow";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IntegrationFailure:
    case ErrorCode::NotConverged:
    case ErrorCode::PopulationOverflow:
    case ErrorCode::MomentDiverges:
    case ErrorCode::EmbeddingFailure:
    case ErrorCode::IntensityOverflow:
    case ErrorCode::HorizonExceeded:
    case ErrorCode::TooFewPoints:
    case ErrorCode::DegenerateAbscissa:
      return true;
    default:
      return false;
  }
}

namespace {

std::string format_message(ErrorCode code, const std::string& message, const std::string& field) {
  std::string out(error_name(code));
  if (!field.empty()) {
    out += " [" + field + "]";
  }
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string field)
    : std::runtime_error(format_message(code, message, field)),
      code_(code),
      field_(std::move(field)) {}

void fail(ErrorCode code, const std::string& message, std::string field) {
  throw Error(code, message, std::move(field));
}

}  // namespace imf
