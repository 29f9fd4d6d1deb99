#pragma once

#include <stdexcept>
#include <string>

namespace ott {

enum class ErrorCode {
  InvalidArgument,
  CenterOutOfField,
  DimensionMismatch,
  ZeroNormEmbedding,
  AlreadyAugmented,
  NonFiniteCost,
  InfeasibleMarginals,
  IterationMismatch,
  LabelOutOfRange,
  EmbeddingCountMismatch,
  NonMonotonicFrame,
  SeparationInfeasible,
  TooLarge,
  ParseError,
  CountMismatch,
  IoError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CenterOutOfField: return "CenterOutOfField";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroNormEmbedding: return "ZeroNormEmbedding";
    case ErrorCode::AlreadyAugmented: return "AlreadyAugmented";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::InfeasibleMarginals: return "InfeasibleMarginals";
    case ErrorCode::IterationMismatch: return "IterationMismatch";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::EmbeddingCountMismatch: return "EmbeddingCountMismatch";
    case ErrorCode::NonMonotonicFrame: return "NonMonotonicFrame";
    case ErrorCode::SeparationInfeasible: return "SeparationInfeasible";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ott
