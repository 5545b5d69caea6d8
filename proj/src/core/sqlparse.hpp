#pragma once

#include <string>
#include <vector>

#include "core/fragment.hpp"

namespace fragmap {

// A resolved column reference. `instance` distinguishes repeated uses of the
// same relation in one query (self-joins); the first use is instance 1.
struct ColumnRef {
  std::string relation;
  std::string attribute;
  int instance = 1;

  std::string qualified() const { return relation + "." + attribute; }
  friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

struct LiteralValue {
  bool numeric = false;
  std::string lexeme;  // number as written, or string contents unquoted
  double number = 0.0;

  // "2000" or "'John Doe'" (single quotes doubled inside).
  std::string rendered() const;
};

struct SelectItem {
  ColumnRef column;
  std::vector<std::string> aggregates;  // outermost first: {"count"} -> count(x)
  bool distinct_arg = false;            // count(distinct x)

  std::string expression() const;  // canonical fragment text
};

struct ParsedPredicate {
  ColumnRef column;
  std::string op;  // = < > <= >= <> like
  LiteralValue value;

  std::string expression() const;
};

struct FromRelation {
  std::string relation;
  std::string alias;  // defaults to the relation name
  int instance = 1;
};

struct JoinCondition {
  ColumnRef left;
  ColumnRef right;
};

struct ParsedQuery {
  bool distinct = false;
  std::vector<SelectItem> projections;
  std::vector<FromRelation> relations;
  std::vector<ParsedPredicate> predicates;     // attribute-vs-constant only
  std::vector<JoinCondition> join_conditions;  // attribute-vs-attribute, '='
  std::vector<ColumnRef> group_by;
};

// Parse one conjunctive SELECT statement. Identifiers are lowercased, every
// column reference is resolved through the alias table, and `literal op
// column` predicates are flipped so the attribute is always on the left.
// Throws ParseError for malformed input and UnsupportedQuery for recognizable
// SQL outside the subset (subqueries, set operations, HAVING, OR, outer
// joins, ...).
ParsedQuery parse_query(const std::string& sql);

// The query's fragments at the Full level, one per distinct (expression,
// clause) pair, sorted. Join conditions and GROUP BY / ORDER BY / LIMIT
// contribute nothing.
std::vector<QueryFragment> extract_fragments(const ParsedQuery& query);

// Split raw log text into statements: ';' separates (quote-aware), and lines
// whose first non-blank characters are "--" are comments.
std::vector<std::string> split_statements(const std::string& text);

}  // namespace fragmap
