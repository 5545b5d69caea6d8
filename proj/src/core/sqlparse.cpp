#include "core/sqlparse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace fragmap {

namespace {

struct Token {
  enum Kind { Ident, Number, String, Symbol, End } kind = End;
  std::string text;  // identifiers lowercased; string contents verbatim
};

class Lexer {
 public:
  explicit Lexer(const std::string& sql) : s_(sql) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      Token t = next();
      bool end = t.kind == Token::End;
      out.push_back(std::move(t));
      if (end) break;
    }
    return out;
  }

 private:
  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ >= s_.size()) return {Token::End, ""};
    char c = s_[pos_];
    if (c == '\'' || c == '"') return lex_string(c);
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident();
    return lex_symbol();
  }

  Token lex_string(char quote) {
    ++pos_;
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == quote) {
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == quote) {
          out.push_back(quote);  // doubled quote inside the literal
          pos_ += 2;
          continue;
        }
        ++pos_;
        return {Token::String, out};
      }
      out.push_back(c);
      ++pos_;
    }
    fail(ErrorCode::ParseError, "unterminated string literal");
  }

  Token lex_number() {
    size_t start = pos_;
    bool dot = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '.' && !dot) {
        dot = true;
        ++pos_;
      } else {
        break;
      }
    }
    return {Token::Number, s_.substr(start, pos_ - start)};
  }

  Token lex_ident() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return {Token::Ident, to_lower(s_.substr(start, pos_ - start))};
  }

  Token lex_symbol() {
    static const char* two[] = {"<=", ">=", "<>", "!="};
    for (const char* t : two) {
      if (s_.compare(pos_, 2, t) == 0) {
        pos_ += 2;
        return {Token::Symbol, t};
      }
    }
    char c = s_[pos_++];
    std::string sym(1, c);
    static const std::string allowed = ",().=<>*;";
    if (allowed.find(c) == std::string::npos)
      fail(ErrorCode::ParseError, "unexpected character '" + sym + "'");
    return {Token::Symbol, sym};
  }

  const std::string& s_;
  size_t pos_ = 0;
};

const std::set<std::string> kAggregateNames = {"count", "sum", "avg", "min", "max"};

// Constructs outside the subset that we still want to name in diagnostics.
const std::set<std::string> kUnsupportedKeywords = {
    "or", "not", "in", "between", "is", "null", "having", "union", "intersect",
    "except", "exists", "case", "left", "right", "outer", "full", "cross",
    "natural", "offset",
};

struct RawColumn {
  std::string qualifier;  // may be empty
  std::string column;
};

struct RawOperand {
  enum Kind { Column, Literal } kind = Column;
  RawColumn column;
  LiteralValue literal;
};

class Parser {
 public:
  explicit Parser(const std::string& sql) : tokens_(Lexer(sql).run()) {}

  ParsedQuery run() {
    expect_keyword("select");
    if (peek_keyword("distinct")) {
      advance();
      query_.distinct = true;
    }
    parse_select_list();
    expect_keyword("from");
    parse_from_list();
    if (peek_keyword("where")) {
      advance();
      parse_condition_list();
    }
    parse_trailing_clauses();
    if (peek_symbol(";")) advance();
    if (!at_end()) fail_here("trailing tokens after statement");
    resolve();
    return std::move(query_);
  }

 private:
  // --- token plumbing -------------------------------------------------
  const Token& cur() const { return tokens_[idx_]; }
  void advance() { if (idx_ + 1 < tokens_.size()) ++idx_; }
  bool at_end() const { return cur().kind == Token::End; }

  bool peek_keyword(const std::string& kw) const {
    return cur().kind == Token::Ident && cur().text == kw;
  }
  bool peek_symbol(const std::string& sym) const {
    return cur().kind == Token::Symbol && cur().text == sym;
  }

  void expect_keyword(const std::string& kw) {
    if (!peek_keyword(kw)) fail_here("expected '" + kw + "'");
    advance();
  }
  void expect_symbol(const std::string& sym) {
    if (!peek_symbol(sym)) fail_here("expected '" + sym + "'");
    advance();
  }

  [[noreturn]] void fail_here(const std::string& what) const {
    std::string got = at_end() ? "end of input" : "'" + cur().text + "'";
    fail(ErrorCode::ParseError, what + ", got " + got);
  }

  void reject_unsupported(const std::string& what) const {
    fail(ErrorCode::UnsupportedQuery, what);
  }

  std::string take_ident(const std::string& what) {
    if (cur().kind != Token::Ident) fail_here("expected " + what);
    check_reserved(cur().text);
    std::string t = cur().text;
    advance();
    return t;
  }

  void check_reserved(const std::string& ident) const {
    if (ident == "select") reject_unsupported("subqueries are not supported");
    if (kUnsupportedKeywords.count(ident))
      reject_unsupported("'" + ident + "' is not supported");
  }

  // --- grammar --------------------------------------------------------
  void parse_select_list() {
    while (true) {
      parse_select_item();
      if (!peek_symbol(",")) break;
      advance();
    }
  }

  void parse_select_item() {
    if (peek_symbol("*")) reject_unsupported("'*' projections are not supported");
    RawSelect item;
    parse_select_expr(&item);
    raw_projections_.push_back(std::move(item));
  }

  struct RawSelect {
    RawColumn column;
    std::vector<std::string> aggregates;
    bool distinct_arg = false;
  };

  void parse_select_expr(RawSelect* item) {
    std::string first = take_ident("column or aggregate");
    if (peek_symbol("(")) {
      if (!kAggregateNames.count(first))
        reject_unsupported("function '" + first + "' is not supported");
      advance();
      item->aggregates.push_back(first);
      if (peek_keyword("distinct")) {
        advance();
        item->distinct_arg = true;
      }
      if (peek_symbol("*")) reject_unsupported("'*' inside aggregates is not supported");
      parse_select_expr(item);
      expect_symbol(")");
      return;
    }
    item->column = finish_column(first);
  }

  RawColumn finish_column(const std::string& first) {
    RawColumn col;
    if (peek_symbol(".")) {
      advance();
      col.qualifier = first;
      col.column = take_ident("column name");
    } else {
      col.column = first;
    }
    return col;
  }

  void parse_from_list() {
    parse_from_item();
    while (true) {
      if (peek_symbol(",")) {
        advance();
        parse_from_item();
        continue;
      }
      if (peek_keyword("inner")) {
        advance();  // INNER JOIN == JOIN
        if (!peek_keyword("join")) fail_here("expected 'join'");
      }
      if (peek_keyword("join")) {
        advance();
        parse_from_item();
        expect_keyword("on");
        parse_predicate();
        continue;
      }
      break;
    }
  }

  void parse_from_item() {
    FromRelation rel;
    rel.relation = take_ident("relation name");
    if (peek_keyword("as")) advance();
    if (cur().kind == Token::Ident && !is_clause_boundary(cur().text)) {
      check_reserved(cur().text);
      rel.alias = cur().text;
      advance();
    } else {
      rel.alias = rel.relation;
    }
    rel.instance = ++instance_count_[rel.relation];
    if (alias_table_.count(rel.alias))
      fail(ErrorCode::ParseError, "duplicate alias '" + rel.alias + "'");
    alias_table_[rel.alias] = {rel.relation, rel.instance};
    query_.relations.push_back(rel);
  }

  static bool is_clause_boundary(const std::string& ident) {
    return ident == "where" || ident == "group" || ident == "order" ||
           ident == "limit" || ident == "join" || ident == "inner" ||
           ident == "on";
  }

  void parse_condition_list() {
    while (true) {
      parse_predicate();
      if (peek_keyword("and")) {
        advance();
        continue;
      }
      break;
    }
  }

  void parse_predicate() {
    RawOperand lhs = parse_operand();
    if (peek_keyword("like")) {
      advance();
      if (lhs.kind != RawOperand::Column)
        fail_here("LIKE requires a column on the left");
      if (cur().kind != Token::String) fail_here("LIKE requires a string pattern");
      LiteralValue v;
      v.numeric = false;
      v.lexeme = cur().text;
      advance();
      raw_predicates_.push_back({lhs.column, "like", v, {}, false});
      return;
    }
    if (cur().kind != Token::Symbol || !is_comparison(cur().text))
      fail_here("expected comparison operator");
    std::string op = cur().text;
    if (op == "!=") op = "<>";
    advance();
    RawOperand rhs = parse_operand();

    if (lhs.kind == RawOperand::Column && rhs.kind == RawOperand::Column) {
      if (op != "=")
        reject_unsupported("non-equality joins are not supported");
      raw_joins_.push_back({lhs.column, rhs.column});
      return;
    }
    if (lhs.kind == RawOperand::Literal && rhs.kind == RawOperand::Literal)
      reject_unsupported("constant-only predicates are not supported");
    if (lhs.kind == RawOperand::Literal) {
      std::swap(lhs, rhs);
      op = flip_operator(op);
    }
    raw_predicates_.push_back({lhs.column, op, rhs.literal, {}, false});
  }

  static bool is_comparison(const std::string& op) {
    return op == "=" || op == "<" || op == ">" || op == "<=" || op == ">=" ||
           op == "<>" || op == "!=";
  }

  static std::string flip_operator(const std::string& op) {
    if (op == "<") return ">";
    if (op == ">") return "<";
    if (op == "<=") return ">=";
    if (op == ">=") return "<=";
    return op;  // = and <> are symmetric
  }

  RawOperand parse_operand() {
    RawOperand out;
    if (cur().kind == Token::Number) {
      out.kind = RawOperand::Literal;
      out.literal.numeric = true;
      out.literal.lexeme = cur().text;
      out.literal.number = parse_number(cur().text).value_or(0.0);
      advance();
      return out;
    }
    if (cur().kind == Token::String) {
      out.kind = RawOperand::Literal;
      out.literal.numeric = false;
      out.literal.lexeme = cur().text;
      advance();
      return out;
    }
    if (peek_symbol("(")) reject_unsupported("parenthesized conditions are not supported");
    if (cur().kind == Token::Ident) {
      out.kind = RawOperand::Column;
      out.column = finish_column(take_ident("column"));
      return out;
    }
    fail_here("expected column or literal");
  }

  void parse_trailing_clauses() {
    if (peek_keyword("group")) {
      advance();
      expect_keyword("by");
      while (true) {
        raw_group_by_.push_back(finish_column(take_ident("column")));
        if (!peek_symbol(",")) break;
        advance();
      }
    }
    if (peek_keyword("order")) {
      advance();
      expect_keyword("by");
      while (true) {
        RawSelect discard;
        parse_select_expr(&discard);  // column or aggregate; validated, not retained
        if (peek_keyword("asc") || peek_keyword("desc")) advance();
        if (!peek_symbol(",")) break;
        advance();
      }
    }
    if (peek_keyword("limit")) {
      advance();
      if (cur().kind != Token::Number) fail_here("LIMIT requires a number");
      advance();
    }
  }

  // --- resolution -----------------------------------------------------
  ColumnRef resolve_column(const RawColumn& raw) const {
    if (!raw.qualifier.empty()) {
      auto it = alias_table_.find(raw.qualifier);
      if (it != alias_table_.end())
        return {it->second.first, raw.column, it->second.second};
      // Accept the bare relation name as a qualifier when unambiguous; the
      // alias map already covers the common case where no alias was given.
      auto cnt = instance_count_.find(raw.qualifier);
      if (cnt != instance_count_.end()) {
        if (cnt->second > 1)
          fail(ErrorCode::ParseError,
               "ambiguous qualifier '" + raw.qualifier + "' (multiple instances)");
        return {raw.qualifier, raw.column, 1};
      }
      fail(ErrorCode::ParseError, "unknown qualifier '" + raw.qualifier + "'");
    }
    if (query_.relations.size() != 1)
      fail(ErrorCode::ParseError,
           "unqualified column '" + raw.column + "' with multiple relations");
    return {query_.relations[0].relation, raw.column, 1};
  }

  void resolve() {
    for (const RawSelect& raw : raw_projections_) {
      SelectItem item;
      item.column = resolve_column(raw.column);
      item.aggregates = raw.aggregates;
      item.distinct_arg = raw.distinct_arg;
      query_.projections.push_back(std::move(item));
    }
    for (const RawPredicate& raw : raw_predicates_) {
      ParsedPredicate p;
      p.column = resolve_column(raw.column);
      p.op = raw.op;
      p.value = raw.value;
      query_.predicates.push_back(std::move(p));
    }
    for (const auto& [lhs, rhs] : raw_joins_) {
      ColumnRef l = resolve_column(lhs);
      ColumnRef r = resolve_column(rhs);
      if (l.relation == r.relation && l.instance == r.instance)
        reject_unsupported("column comparison within one relation instance");
      query_.join_conditions.push_back({std::move(l), std::move(r)});
    }
    for (const RawColumn& raw : raw_group_by_)
      query_.group_by.push_back(resolve_column(raw));
  }

  struct RawPredicate {
    RawColumn column;
    std::string op;
    LiteralValue value;
    RawColumn unused_rhs;
    bool flipped = false;
  };

  std::vector<Token> tokens_;
  size_t idx_ = 0;
  ParsedQuery query_;
  std::vector<RawSelect> raw_projections_;
  std::vector<RawPredicate> raw_predicates_;
  std::vector<std::pair<RawColumn, RawColumn>> raw_joins_;
  std::vector<RawColumn> raw_group_by_;
  std::map<std::string, std::pair<std::string, int>> alias_table_;
  std::map<std::string, int> instance_count_;
};

}  // namespace

std::string LiteralValue::rendered() const {
  if (numeric) return lexeme;
  std::string out = "'";
  for (char c : lexeme) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  out.push_back('\'');
  return out;
}

std::string SelectItem::expression() const {
  std::string out = column.qualified();
  if (distinct_arg) out = "distinct " + out;
  for (auto it = aggregates.rbegin(); it != aggregates.rend(); ++it)
    out = *it + "(" + out + ")";
  return out;
}

std::string ParsedPredicate::expression() const {
  return column.qualified() + " " + op + " " + value.rendered();
}

ParsedQuery parse_query(const std::string& sql) {
  std::string body = trim(sql);
  if (body.empty()) fail(ErrorCode::ParseError, "empty statement");
  return Parser(body).run();
}

std::vector<QueryFragment> extract_fragments(const ParsedQuery& query) {
  std::set<QueryFragment> out;
  for (const SelectItem& item : query.projections)
    out.insert({item.expression(), FragmentContext::Select, ObscurityLevel::Full});
  for (const FromRelation& rel : query.relations)
    out.insert({rel.relation, FragmentContext::From, ObscurityLevel::Full});
  for (const ParsedPredicate& pred : query.predicates)
    out.insert({pred.expression(), FragmentContext::Where, ObscurityLevel::Full});
  return {out.begin(), out.end()};
}

std::vector<std::string> split_statements(const std::string& text) {
  // Drop comment lines first, then split on semicolons outside quotes.
  std::string body;
  for (const std::string& line : split(text, '\n')) {
    if (starts_with(trim(line), "--")) continue;
    body += line;
    body += '\n';
  }
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  for (char c : body) {
    if (quote) {
      cur.push_back(c);
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      cur.push_back(c);
      continue;
    }
    if (c == ';') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
      continue;
    }
    cur.push_back(c);
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace fragmap
