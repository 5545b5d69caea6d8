#include "core/errors.hpp"

namespace fragmap {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::FormatError: return "format-error";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::UnsupportedQuery: return "unsupported-query";
    case ErrorCode::ObscurityMismatch: return "obscurity-mismatch";
    case ErrorCode::MissingPrimaryKey: return "missing-primary-key";
    case ErrorCode::NotPlainAttribute: return "not-plain-attribute";
    case ErrorCode::UnknownElement: return "unknown-element";
    case ErrorCode::NoCandidates: return "no-candidates";
    case ErrorCode::CombinatorialLimit: return "combinatorial-limit";
    case ErrorCode::ZeroScore: return "zero-score";
    case ErrorCode::Disconnected: return "disconnected";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace fragmap
