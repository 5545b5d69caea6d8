#pragma once

#include <stdexcept>
#include <string>

namespace fragmap {

enum class ErrorCode {
  IoError,            // file missing / unreadable / unwritable
  FormatError,        // malformed schema, graph, embedding or task file
  ParseError,         // SQL statement does not match the supported grammar
  UnsupportedQuery,   // recognizably SQL, but outside the supported subset
  ObscurityMismatch,  // merging graphs built at different obscurity levels
  MissingPrimaryKey,  // plain attribute with no pairing target available
  NotPlainAttribute,  // pairing requested for a key attribute
  UnknownElement,     // name does not resolve to a relation/attribute
  NoCandidates,       // a keyword survived with zero candidate mappings
  CombinatorialLimit, // configuration cross-product exceeds the cap
  ZeroScore,          // geometric mean over a zero factor
  Disconnected,       // terminals not connected in the join graph
  InvalidArgument,    // bad parameter combination at an API boundary
  Internal,
};

const char* error_code_name(ErrorCode code);

// Single exception type used across the engine; carries a stable code so the
// C boundary can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fragmap
