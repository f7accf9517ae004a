#include "rapidip/error.hpp"

namespace rapidip {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyBox: return "EMPTY_BOX";
    case ErrorCode::InvalidModel: return "INVALID_MODEL";
    case ErrorCode::MalformedSection: return "MALFORMED_SECTION";
    case ErrorCode::UnknownRowReference: return "UNKNOWN_ROW_REFERENCE";
    case ErrorCode::UnknownColumnReference: return "UNKNOWN_COLUMN_REFERENCE";
    case ErrorCode::NonNumericField: return "NON_NUMERIC_FIELD";
    case ErrorCode::IterationGuard: return "ITERATION_GUARD";
    case ErrorCode::NotPureInteger: return "NOT_PURE_INTEGER";
    case ErrorCode::AllFixed: return "ALL_FIXED";
    case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::MissingPair: return "MISSING_PAIR";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace rapidip
