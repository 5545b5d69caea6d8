#include "core/value_index.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include "core/errors.hpp"
#include "core/porter.hpp"
#include "core/text.hpp"

namespace fragmap {

void ValueIndex::add_value(const Attribute& attr, const std::string& raw) {
  std::string cell = trim(raw);
  if (cell.empty()) return;  // missing value
  if (attr.type == AttributeType::Numeric) {
    auto n = parse_number(cell);
    if (!n)
      fail(ErrorCode::FormatError, "non-numeric value '" + cell + "' for '" +
                                       attr.qualified() + "'");
    NumericIndex& idx = numeric_[attr.qualified()];
    if (idx.seen.insert(*n).second) {
      idx.values.insert(std::lower_bound(idx.values.begin(), idx.values.end(), *n), *n);
    }
    return;
  }
  TextIndex& idx = text_[attr.qualified()];
  if (!idx.seen.insert(cell).second) return;  // duplicate value
  size_t id = idx.values.size();
  idx.values.push_back(cell);
  for (const std::string& word : word_tokens(cell))
    idx.stem_to_values[porter_stem(word)].insert(id);
}

std::vector<ValueIndex::TextMatch> ValueIndex::find_text_attrs(
    const std::vector<std::string>& tokens) const {
  std::vector<TextMatch> out;
  if (tokens.empty()) return out;
  std::vector<std::string> stems;
  stems.reserve(tokens.size());
  for (const std::string& t : tokens) stems.push_back(porter_stem(t));

  for (const auto& [attr, idx] : text_) {
    std::set<size_t> survivors;
    bool first = true;
    for (const std::string& stem : stems) {
      std::set<size_t> matches;
      for (auto it = idx.stem_to_values.lower_bound(stem);
           it != idx.stem_to_values.end() && starts_with(it->first, stem); ++it)
        matches.insert(it->second.begin(), it->second.end());
      if (first) {
        survivors = std::move(matches);
        first = false;
      } else {
        std::set<size_t> both;
        std::set_intersection(survivors.begin(), survivors.end(),
                              matches.begin(), matches.end(),
                              std::inserter(both, both.begin()));
        survivors = std::move(both);
      }
      if (survivors.empty()) break;
    }
    for (size_t id : survivors) out.push_back({attr, idx.values[id]});
  }
  std::sort(out.begin(), out.end(), [](const TextMatch& a, const TextMatch& b) {
    return std::tie(a.attribute, a.value) < std::tie(b.attribute, b.value);
  });
  return out;
}

std::vector<std::string> ValueIndex::find_numeric_attrs(
    double number, const std::string& op) const {
  std::vector<std::string> out;
  for (const auto& [attr, idx] : numeric_)
    if (numeric_match_exists(attr, number, op)) out.push_back(attr);
  return out;
}

bool ValueIndex::numeric_match_exists(const std::string& attribute,
                                      double number,
                                      const std::string& op) const {
  auto it = numeric_.find(attribute);
  if (it == numeric_.end() || it->second.values.empty()) return false;
  const std::vector<double>& v = it->second.values;
  if (op == "=") return std::binary_search(v.begin(), v.end(), number);
  if (op == "<") return v.front() < number;
  if (op == "<=") return v.front() <= number;
  if (op == ">") return v.back() > number;
  if (op == ">=") return v.back() >= number;
  if (op == "<>")
    return v.size() > 1 || !std::binary_search(v.begin(), v.end(), number);
  fail(ErrorCode::InvalidArgument, "unknown numeric operator '" + op + "'");
}

const std::vector<std::string>* ValueIndex::text_values(
    const std::string& attribute) const {
  auto it = text_.find(attribute);
  return it == text_.end() ? nullptr : &it->second.values;
}

const std::vector<double>* ValueIndex::numeric_values(
    const std::string& attribute) const {
  auto it = numeric_.find(attribute);
  return it == numeric_.end() ? nullptr : &it->second.values;
}

size_t ValueIndex::indexed_value_count() const {
  size_t n = 0;
  for (const auto& [_, idx] : text_) n += idx.values.size();
  for (const auto& [_, idx] : numeric_) n += idx.values.size();
  return n;
}

ValueIndex load_data_dir(const SchemaGraph& schema, const std::string& dir) {
  if (!std::filesystem::is_directory(dir))
    fail(ErrorCode::IoError, "data directory not found: " + dir);
  ValueIndex index;
  for (const auto& [name, rel] : schema.relations()) {
    std::filesystem::path path = std::filesystem::path(dir) / (name + ".tsv");
    std::ifstream in(path);
    if (!in) continue;  // relation without data

    std::string header;
    if (!std::getline(in, header))
      fail(ErrorCode::FormatError, path.string() + ": empty data file");
    std::vector<std::string> columns = split(trim(header), '\t');
    std::vector<const Attribute*> attrs;
    for (std::string& c : columns) {
      c = to_lower(trim(c));
      std::string qualified = name + "." + c;
      if (!schema.has_attribute(qualified))
        fail(ErrorCode::FormatError,
             path.string() + ": header names unknown attribute '" + qualified + "'");
      attrs.push_back(&schema.attribute(qualified));
    }

    std::string line;
    size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      std::vector<std::string> cells = split(line, '\t');
      if (cells.size() != attrs.size())
        fail(ErrorCode::FormatError,
             path.string() + " line " + std::to_string(lineno) + ": expected " +
                 std::to_string(attrs.size()) + " cells, found " +
                 std::to_string(cells.size()));
      for (size_t i = 0; i < cells.size(); ++i)
        index.add_value(*attrs[i], cells[i]);
    }
  }
  return index;
}

Catalog open_catalog(const std::string& schema_path, const std::string& data_dir) {
  Catalog catalog;
  catalog.schema = SchemaGraph::load_file(schema_path);
  if (!data_dir.empty()) catalog.index = load_data_dir(catalog.schema, data_dir);
  return catalog;
}

}  // namespace fragmap
