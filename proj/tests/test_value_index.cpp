#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "core/errors.hpp"
#include "core/porter.hpp"
#include "core/schema.hpp"
#include "core/text.hpp"
#include "core/value_index.hpp"

using namespace fragmap;

namespace {

Attribute text_attr(const std::string& rel, const std::string& name) {
  Attribute a;
  a.relation = rel;
  a.name = name;
  a.type = AttributeType::Text;
  return a;
}

Attribute num_attr(const std::string& rel, const std::string& name) {
  Attribute a;
  a.relation = rel;
  a.name = name;
  a.type = AttributeType::Numeric;
  return a;
}

// Reference implementation: scan every value, token-by-token.
bool value_matches(const std::string& value,
                   const std::vector<std::string>& query_tokens) {
  std::vector<std::string> stems;
  for (const auto& w : word_tokens(value)) stems.push_back(porter_stem(w));
  for (const auto& qt : query_tokens) {
    std::string qs = porter_stem(qt);
    bool any = false;
    for (const auto& vs : stems)
      if (vs.size() >= qs.size() && vs.compare(0, qs.size(), qs) == 0) {
        any = true;
        break;
      }
    if (!any) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("text search requires every token to prefix-match a stem") {
  ValueIndex idx;
  auto title = text_attr("publication", "title");
  idx.add_value(title, "Efficient Query Processing");
  idx.add_value(title, "Query Optimization in Databases");
  idx.add_value(title, "Streaming Systems");

  auto hits = idx.find_text_attrs({"query"});
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].value == "Efficient Query Processing");
  CHECK(hits[1].value == "Query Optimization in Databases");

  hits = idx.find_text_attrs({"query", "databases"});
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].value == "Query Optimization in Databases");

  // stems match: "processing" -> "process" matches token "processed"
  hits = idx.find_text_attrs({"processed"});
  REQUIRE(hits.size() == 1);

  // prefixes of stems match too
  hits = idx.find_text_attrs({"stre"});
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].value == "Streaming Systems");

  CHECK(idx.find_text_attrs({"nomatch"}).empty());
}

TEST_CASE("text search agrees with a full scan on random data") {
  std::vector<std::string> words = {
      "database", "system",  "query",   "network", "learning",
      "graph",    "stream",  "mining",  "social",  "index"};
  std::mt19937_64 rng(101);
  ValueIndex idx;
  std::vector<std::pair<std::string, std::string>> all;  // (attr, value)
  for (int a = 0; a < 3; ++a) {
    auto attr = text_attr("r", "t" + std::to_string(a));
    for (int v = 0; v < 40; ++v) {
      std::string value;
      int len = 1 + static_cast<int>(rng() % 3);
      for (int w = 0; w < len; ++w) {
        if (w) value += " ";
        value += words[rng() % words.size()];
      }
      idx.add_value(attr, value);
      all.push_back({attr.qualified(), value});
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> q;
    int len = 1 + static_cast<int>(rng() % 2);
    for (int w = 0; w < len; ++w) {
      std::string word = words[rng() % words.size()];
      // sometimes query with a prefix of the word
      if (rng() % 2) word = word.substr(0, 3 + rng() % 3);
      q.push_back(word);
    }
    auto got = idx.find_text_attrs(q);
    std::vector<std::pair<std::string, std::string>> expect;
    for (const auto& [attr, value] : all)
      if (value_matches(value, q)) expect.push_back({attr, value});
    REQUIRE(got.size() == expect.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].attribute == expect[i].first);
      CHECK(got[i].value == expect[i].second);
    }
  }
}

TEST_CASE("duplicate and empty cells are ignored") {
  ValueIndex idx;
  auto title = text_attr("r", "t");
  idx.add_value(title, "Alpha");
  idx.add_value(title, "Alpha");
  idx.add_value(title, "");
  idx.add_value(title, "  ");
  REQUIRE(idx.text_values("r.t") != nullptr);
  CHECK(idx.text_values("r.t")->size() == 1);

  auto year = num_attr("r", "y");
  idx.add_value(year, "2000");
  idx.add_value(year, "2000");
  idx.add_value(year, "");
  CHECK(idx.numeric_values("r.y")->size() == 1);
  CHECK_THROWS_AS(idx.add_value(year, "abc"), Error);
}

TEST_CASE("numeric search by comparison operator") {
  ValueIndex idx;
  auto year = num_attr("publication", "year");
  auto cites = num_attr("publication", "citations");
  for (const char* v : {"1995", "2000", "2005"}) idx.add_value(year, v);
  for (const char* v : {"10", "2000"}) idx.add_value(cites, v);

  auto eq = idx.find_numeric_attrs(2000, "=");
  CHECK(eq == std::vector<std::string>{"publication.citations",
                                       "publication.year"});
  CHECK(idx.find_numeric_attrs(1990, "=").empty());
  CHECK(idx.find_numeric_attrs(1990, "<") ==
        std::vector<std::string>{"publication.citations"});
  CHECK(idx.find_numeric_attrs(2004, ">") ==
        std::vector<std::string>{"publication.year"});
  CHECK(idx.find_numeric_attrs(2005, ">=") ==
        std::vector<std::string>{"publication.year"});
  CHECK(idx.find_numeric_attrs(10, "<=") ==
        std::vector<std::string>{"publication.citations"});
  // <> holds when some value differs from the operand
  CHECK(idx.find_numeric_attrs(2000, "<>") ==
        std::vector<std::string>{"publication.citations",
                                 "publication.year"});
  ValueIndex single;
  auto only = num_attr("r", "n");
  single.add_value(only, "5");
  CHECK(single.find_numeric_attrs(5, "<>").empty());
  CHECK(single.find_numeric_attrs(6, "<>") == std::vector<std::string>{"r.n"});
  CHECK(single.numeric_match_exists("r.n", 5, "="));
  CHECK_FALSE(single.numeric_match_exists("r.n", 5, ">"));
  CHECK_FALSE(single.numeric_match_exists("ghost", 5, "="));
}

TEST_CASE("numeric search agrees with a full scan") {
  std::mt19937_64 rng(77);
  ValueIndex idx;
  std::map<std::string, std::vector<double>> data;
  for (int a = 0; a < 4; ++a) {
    auto attr = num_attr("r", "n" + std::to_string(a));
    for (int v = 0; v < 30; ++v) {
      double val = static_cast<double>(rng() % 50);
      idx.add_value(attr, std::to_string(static_cast<int>(val)));
      data[attr.qualified()].push_back(val);
    }
  }
  const char* ops[] = {"=", "<", ">", "<=", ">=", "<>"};
  for (int trial = 0; trial < 300; ++trial) {
    double num = static_cast<double>(rng() % 55);
    std::string op = ops[rng() % 6];
    auto got = idx.find_numeric_attrs(num, op);
    std::vector<std::string> expect;
    for (const auto& [attr, values] : data) {
      bool any = false;
      for (double v : values) {
        if (op == "=") any = any || v == num;
        else if (op == "<") any = any || v < num;
        else if (op == ">") any = any || v > num;
        else if (op == "<=") any = any || v <= num;
        else if (op == ">=") any = any || v >= num;
        else any = any || v != num;
      }
      if (any) expect.push_back(attr);
    }
    CHECK(got == expect);
  }
}

TEST_CASE("data directory loading rejects a missing directory") {
  // full loading is exercised end to end through the shipped fixture files
  auto schema = SchemaGraph::load_text("relation r\n  a numeric pk\n");
  CHECK_THROWS_AS(load_data_dir(schema, "/nonexistent-dir"), Error);
}
