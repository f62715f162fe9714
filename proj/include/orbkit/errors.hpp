#pragma once

#include <stdexcept>
#include <string>

namespace orbkit {

enum class ErrorCode {
  MixedFields,
  DivisionByZero,
  NoSquareRootInField,
  NotFrobenius,
  NotSeparable,
  NotSplitSemisimple,
  MiddleAlgebraMismatch,
  NotAnOrbifoldDatum,
  NoIsomorphismFound,
  ShapeError,
  DegenerateTracePairing,
  NotAnEquivalence,
  NotClosed,
  MissingEulerDatum,
  InvalidMove,
  LabelAdjacencyViolation,
  TransversalityViolation,
  UnknownCommand,
  FixtureNotFound,
  SchemaVersionMismatch,
  ParseError,
  Unsupported,
  Internal,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MixedFields: return "MixedFields";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NoSquareRootInField: return "NoSquareRootInField";
    case ErrorCode::NotFrobenius: return "NotFrobenius";
    case ErrorCode::NotSeparable: return "NotSeparable";
    case ErrorCode::NotSplitSemisimple: return "NotSplitSemisimple";
    case ErrorCode::MiddleAlgebraMismatch: return "MiddleAlgebraMismatch";
    case ErrorCode::NotAnOrbifoldDatum: return "NotAnOrbifoldDatum";
    case ErrorCode::NoIsomorphismFound: return "NoIsomorphismFound";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::DegenerateTracePairing: return "DegenerateTracePairing";
    case ErrorCode::NotAnEquivalence: return "NotAnEquivalence";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::MissingEulerDatum: return "MissingEulerDatum";
    case ErrorCode::InvalidMove: return "InvalidMove";
    case ErrorCode::LabelAdjacencyViolation: return "LabelAdjacencyViolation";
    case ErrorCode::TransversalityViolation: return "TransversalityViolation";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::FixtureNotFound: return "FixtureNotFound";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace orbkit
