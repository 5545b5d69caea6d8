#include "core/fragment.hpp"

#include "core/text.hpp"

namespace fragmap {

const char* context_name(FragmentContext c) {
  switch (c) {
    case FragmentContext::Select: return "select";
    case FragmentContext::From: return "from";
    case FragmentContext::Where: return "where";
  }
  return "?";
}

const char* obscurity_name(ObscurityLevel level) {
  switch (level) {
    case ObscurityLevel::Full: return "full";
    case ObscurityLevel::NoConst: return "noconst";
    case ObscurityLevel::NoConstOp: return "noconstop";
  }
  return "?";
}

bool parse_context(const std::string& name, FragmentContext* out) {
  std::string n = to_lower(name);
  if (n == "select") *out = FragmentContext::Select;
  else if (n == "from") *out = FragmentContext::From;
  else if (n == "where") *out = FragmentContext::Where;
  else return false;
  return true;
}

bool parse_obscurity(const std::string& name, ObscurityLevel* out) {
  std::string n = to_lower(name);
  if (n == "full") *out = ObscurityLevel::Full;
  else if (n == "noconst") *out = ObscurityLevel::NoConst;
  else if (n == "noconstop") *out = ObscurityLevel::NoConstOp;
  else return false;
  return true;
}

QueryFragment obscure(const QueryFragment& fragment, ObscurityLevel level) {
  QueryFragment out = fragment;
  out.obscurity = level;
  if (fragment.context != FragmentContext::Where ||
      level == ObscurityLevel::Full)
    return out;

  // Canonical predicate shape: "<attribute> <operator> <value>". The
  // attribute never contains spaces; the value may ("... = 'John Doe'").
  const std::string& expr = fragment.expression;
  size_t first = expr.find(' ');
  if (first == std::string::npos) return out;
  size_t second = expr.find(' ', first + 1);
  if (second == std::string::npos) return out;

  std::string attr = expr.substr(0, first);
  std::string op = expr.substr(first + 1, second - first - 1);
  if (level == ObscurityLevel::NoConstOp) op = "?op";
  out.expression = attr + " " + op + " ?val";
  return out;
}

}  // namespace fragmap
