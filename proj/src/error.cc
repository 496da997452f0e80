#include "qcomplete/error.h"

namespace qcomplete {

const char* code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::Unsupported: return "UNSUPPORTED_CONSTRUCT";
    case ErrorCode::UnknownTable: return "UNKNOWN_TABLE";
    case ErrorCode::UnknownColumn: return "UNKNOWN_COLUMN";
    case ErrorCode::AmbiguousColumn: return "AMBIGUOUS_COLUMN";
    case ErrorCode::TypeMismatch: return "TYPE_MISMATCH";
    case ErrorCode::EmptyConjunction: return "EMPTY_CONJUNCTION";
    case ErrorCode::RaggedRow: return "RAGGED_ROW";
    case ErrorCode::DuplicateHeader: return "DUPLICATE_HEADER";
    case ErrorCode::SchemaMismatch: return "SCHEMA_MISMATCH";
    case ErrorCode::ValueParse: return "VALUE_PARSE_ERROR";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::EmptyResult: return "EMPTY_RESULT";
    case ErrorCode::EmptyWorkingData: return "EMPTY_WORKING_DATA";
    case ErrorCode::NoUsableFeatures: return "NO_USABLE_FEATURES";
    case ErrorCode::KOutOfRange: return "K_OUT_OF_RANGE";
    case ErrorCode::SizeMismatch: return "SIZE_MISMATCH";
    case ErrorCode::CannotPrune: return "CANNOT_PRUNE";
    case ErrorCode::BareRoot: return "BARE_ROOT";
    case ErrorCode::Timeout: return "TIMEOUT";
    case ErrorCode::BadRequest: return "BAD_REQUEST";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "INTERNAL";
}

}  // namespace qcomplete
