#pragma once

#include <compare>
#include <string>

namespace fragmap {

// Clause a fragment was pulled from. Join conditions are deliberately not a
// context: they are derived structure, not evidence of intent.
enum class FragmentContext { Select, From, Where };

// How much of a predicate is blanked out before counting:
//   Full       publication.year > 2000
//   NoConst    publication.year > ?val
//   NoConstOp  publication.year ?op ?val
// Projection and relation fragments are identical at every level.
enum class ObscurityLevel { Full, NoConst, NoConstOp };

const char* context_name(FragmentContext c);
const char* obscurity_name(ObscurityLevel level);
// Returns false when the name is not recognized.
bool parse_context(const std::string& name, FragmentContext* out);
bool parse_obscurity(const std::string& name, ObscurityLevel* out);

struct QueryFragment {
  std::string expression;  // canonical text, single-spaced
  FragmentContext context = FragmentContext::Where;
  ObscurityLevel obscurity = ObscurityLevel::Full;

  // Identity is (context, expression); the level is bookkeeping.
  friend std::strong_ordering operator<=>(const QueryFragment& a,
                                          const QueryFragment& b) {
    if (auto c = a.context <=> b.context; c != 0) return c;
    return a.expression <=> b.expression;
  }
  friend bool operator==(const QueryFragment& a, const QueryFragment& b) {
    return (a <=> b) == 0;
  }
};

// Blank out the constant (and, at the top level, the operator) of a WHERE
// fragment. Idempotent; levels only ever coarsen. SELECT and FROM fragments
// pass through untouched.
QueryFragment obscure(const QueryFragment& fragment, ObscurityLevel level);

}  // namespace fragmap
