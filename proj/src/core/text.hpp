#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fragmap {

std::string to_lower(std::string s);
std::string trim(const std::string& s);

// Collapse every run of whitespace to one space and trim the ends.
std::string collapse_ws(const std::string& s);

// Split on runs of non-alphanumeric characters, lowercasing the pieces.
// "Saving Private Ryan" -> {"saving", "private", "ryan"}; underscores split
// too, so "domain_keyword" -> {"domain", "keyword"}.
std::vector<std::string> word_tokens(const std::string& s);

std::vector<std::string> split(const std::string& s, char sep);

// Split on whitespace runs; no empty fields.
std::vector<std::string> split_ws(const std::string& s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

bool starts_with(const std::string& s, const std::string& prefix);

// Strict decimal number check/parse ("2000", "19.5", "-3"); no exponents.
bool looks_numeric(const std::string& s);
std::optional<double> parse_number(const std::string& s);

// First maximal digit run with an optional decimal point, as written.
// "after 2000" -> "2000"; returns nullopt when the text holds no digits.
std::optional<std::string> first_number_lexeme(const std::string& s);

// Fixed-point formatting used everywhere a score is printed.
std::string format_score(double value);

}  // namespace fragmap
