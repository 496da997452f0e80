#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qcomplete {

// Closed set of failure kinds. The service publishes code_name() verbatim.
enum class ErrorCode {
  ParseError,
  Unsupported,
  UnknownTable,
  UnknownColumn,
  AmbiguousColumn,
  TypeMismatch,
  EmptyConjunction,
  RaggedRow,
  DuplicateHeader,
  SchemaMismatch,
  ValueParse,
  IoError,
  EmptyResult,
  EmptyWorkingData,
  NoUsableFeatures,
  KOutOfRange,
  SizeMismatch,
  CannotPrune,
  BareRoot,
  Timeout,
  BadRequest,
  NotFound,
  Internal,
};

const char* code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  // Byte offset into the query text for parse errors.
  std::optional<std::size_t> position;
  // Token or construct the parser wanted at `position`.
  std::string expected;
  // 1-based data row (header excluded) for ingestion errors.
  std::optional<std::size_t> row;
  std::string column;

 private:
  ErrorCode code_;
};

// Cooperative time budget. Long-running stages call check() at safe points.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(Clock::duration budget) : at_(Clock::now() + budget) {}

  bool expired() const { return at_ && Clock::now() >= *at_; }
  void check() const {
    if (expired()) throw Error(ErrorCode::Timeout, "time budget exhausted");
  }

 private:
  std::optional<Clock::time_point> at_;
};

}  // namespace qcomplete
