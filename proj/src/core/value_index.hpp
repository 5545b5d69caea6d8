#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/schema.hpp"

namespace fragmap {

// Per-attribute indexes over the loaded data. Text attributes get an
// inverted index from stemmed words to the distinct values containing them;
// numeric attributes a sorted list of distinct values.
class ValueIndex {
 public:
  // Folds one cell in. Numeric attributes reject unparseable cells.
  void add_value(const Attribute& attr, const std::string& raw);

  // Every query token must prefix-match (on stems) some word of the value;
  // results are (attribute qualified, matched value), sorted.
  struct TextMatch {
    std::string attribute;  // qualified
    std::string value;
  };
  std::vector<TextMatch> find_text_attrs(const std::vector<std::string>& tokens) const;

  // Numeric attributes holding at least one value v with `v op number` true;
  // op is one of = < > <= >= <>. Sorted by attribute name.
  std::vector<std::string> find_numeric_attrs(double number,
                                              const std::string& op) const;
  bool numeric_match_exists(const std::string& attribute, double number,
                            const std::string& op) const;

  const std::vector<std::string>* text_values(const std::string& attribute) const;
  const std::vector<double>* numeric_values(const std::string& attribute) const;

  size_t indexed_value_count() const;

 private:
  struct TextIndex {
    std::vector<std::string> values;  // distinct, load order
    std::map<std::string, std::set<size_t>> stem_to_values;
    std::set<std::string> seen;
  };
  struct NumericIndex {
    std::vector<double> values;  // distinct, sorted
    std::set<double> seen;
  };

  std::map<std::string, TextIndex> text_;      // by qualified attribute
  std::map<std::string, NumericIndex> numeric_;
};

// Load "<dir>/<relation>.tsv" for every relation that has one: a tab
// separated header row of attribute names, then value rows. Relations
// without a file are simply unindexed.
ValueIndex load_data_dir(const SchemaGraph& schema, const std::string& dir);

// Schema plus the indexes over its data; the unit the mapper works against.
struct Catalog {
  SchemaGraph schema;
  ValueIndex index;
};

Catalog open_catalog(const std::string& schema_path, const std::string& data_dir);

}  // namespace fragmap
