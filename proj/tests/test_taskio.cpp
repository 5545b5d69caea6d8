#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>

#include "core/errors.hpp"
#include "core/schema.hpp"
#include "core/taskio.hpp"

using namespace fragmap;

namespace {

const char* kSchema = R"(relation author
  aid numeric pk
  name text
relation publication
  pid numeric pk
  title text
)";

ErrorCode thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("benchmark object root with full record") {
  Benchmark b = load_benchmark_text(R"({
    "name": "demo",
    "records": [
      {
        "nlq": "papers after 2000",
        "keywords": [
          {"keyword": "papers", "context": "select"},
          {"keyword": "2000", "op": ">"}
        ],
        "gold_sql": "SELECT title FROM publication WHERE year > 2000;",
        "gold_map": ["publication.title", "publication.year > 2000"]
      }
    ]
  })");
  CHECK(b.name == "demo");
  REQUIRE(b.records.size() == 1);
  const TaskRecord& r = b.records[0];
  CHECK(r.nlq == "papers after 2000");
  REQUIRE(r.tasks.size() == 2);
  CHECK(r.tasks[0].keyword == "papers");
  CHECK(r.tasks[0].context == MappingContext::Select);
  CHECK(r.tasks[1].keyword == "2000");
  CHECK(r.tasks[1].context == MappingContext::Where);
  CHECK(r.tasks[1].op == ">");
  CHECK(r.gold_sql == "SELECT title FROM publication WHERE year > 2000;");
  REQUIRE(r.gold_map.size() == 2);
  CHECK(r.gold_map[1] == "publication.year > 2000");
}

TEST_CASE("benchmark bare array root takes fallback name") {
  Benchmark b = load_benchmark_text(
      R"([{"keywords": [{"keyword": "jones"}]}])", "fallback");
  CHECK(b.name == "fallback");
  REQUIRE(b.records.size() == 1);
  CHECK(b.records[0].nlq.empty());
  CHECK(b.records[0].gold_sql.empty());
  CHECK(b.records[0].gold_map.empty());
}

TEST_CASE("keyword defaults") {
  Benchmark b = load_benchmark_text(
      R"([{"keywords": [{"keyword": "smith"}]}])");
  const KeywordTask& t = b.records[0].tasks[0];
  CHECK(t.context == MappingContext::Where);
  CHECK(t.op == "=");
  CHECK(t.aggregates.empty());
  CHECK(!t.group);
}

TEST_CASE("pair keyword carries op, aggregates and group") {
  Benchmark b = load_benchmark_text(R"([{
    "keywords": [{
      "keyword": "john doe",
      "context": "pair",
      "op": "LIKE",
      "aggregates": ["COUNT", "max"],
      "group": true
    }]
  }])");
  const KeywordTask& t = b.records[0].tasks[0];
  CHECK(t.context == MappingContext::Pair);
  CHECK(t.op == "like");
  REQUIRE(t.aggregates.size() == 2);
  CHECK(t.aggregates[0] == "count");
  CHECK(t.aggregates[1] == "max");
  CHECK(t.group);
}

TEST_CASE("not-equals operator is normalized") {
  Benchmark b = load_benchmark_text(
      R"([{"keywords": [{"keyword": "2000", "op": "!="}]}])");
  CHECK(b.records[0].tasks[0].op == "<>");
}

TEST_CASE("context restrictions on op, aggregates and group") {
  auto rejects = [](const std::string& text) {
    CHECK(thrown_code([&] { load_benchmark_text(text); }) ==
          ErrorCode::FormatError);
  };
  rejects(R"([{"keywords": [{"keyword": "x", "context": "select", "op": ">"}]}])");
  rejects(R"([{"keywords": [{"keyword": "x", "context": "from", "op": "="}]}])");
  rejects(R"([{"keywords": [{"keyword": "x", "aggregates": ["count"]}]}])");
  rejects(R"([{"keywords": [{"keyword": "x", "context": "from", "group": true}]}])");
}

TEST_CASE("invalid names and shapes are format errors") {
  auto code = [](const std::string& text) {
    return thrown_code([&] { load_benchmark_text(text); });
  };
  CHECK(code("{nope") == ErrorCode::FormatError);
  CHECK(code(R"("just a string")") == ErrorCode::FormatError);
  CHECK(code(R"({"records": 7})") == ErrorCode::FormatError);
  CHECK(code(R"({"name": 7, "records": []})") == ErrorCode::FormatError);
  CHECK(code(R"([{"keywords": []}])") == ErrorCode::FormatError);
  CHECK(code(R"([{"keywords": [{"keyword": ""}]}])") == ErrorCode::FormatError);
  CHECK(code(R"([{"keywords": [{"keyword": "x", "context": "having"}]}])") ==
        ErrorCode::FormatError);
  CHECK(code(R"([{"keywords": [{"keyword": "x", "op": "between"}]}])") ==
        ErrorCode::FormatError);
  CHECK(code(
            R"([{"keywords": [{"keyword": "x", "context": "select", "aggregates": ["median"]}]}])") ==
        ErrorCode::FormatError);
  CHECK(code(R"([{"keywords": ["x"]}])") == ErrorCode::FormatError);
  CHECK(code(R"([17])") == ErrorCode::FormatError);
}

TEST_CASE("unknown fields are rejected at every level") {
  auto code = [](const std::string& text) {
    return thrown_code([&] { load_benchmark_text(text); });
  };
  CHECK(code(R"({"name": "x", "records": [], "extra": 1})") ==
        ErrorCode::FormatError);
  CHECK(code(R"([{"keywords": [{"keyword": "x"}], "extra": 1}])") ==
        ErrorCode::FormatError);
  CHECK(code(R"([{"keywords": [{"keyword": "x", "extra": 1}]}])") ==
        ErrorCode::FormatError);
}

TEST_CASE("gold sql must parse and gold_map must match keyword count") {
  std::string bad_sql = thrown_message([&] {
    load_benchmark_text(R"([
      {"keywords": [{"keyword": "a"}]},
      {"keywords": [{"keyword": "b"}], "gold_sql": "SELECT FROM"}
    ])");
  });
  CHECK(bad_sql.find("record 2") != std::string::npos);
  CHECK(bad_sql.find("gold sql") != std::string::npos);

  CHECK(thrown_code([&] {
          load_benchmark_text(
              R"([{"keywords": [{"keyword": "a"}], "gold_map": ["x", "y"]}])");
        }) == ErrorCode::FormatError);
}

TEST_CASE("benchmark file loading") {
  const char* path = "taskio_demo.json";
  {
    std::ofstream out(path);
    out << R"([{"keywords": [{"keyword": "smith"}]}])";
  }
  Benchmark b = load_benchmark_file(path);
  CHECK(b.name == "taskio_demo");
  CHECK(b.records.size() == 1);
  std::remove(path);

  CHECK(thrown_code([&] { load_benchmark_file("no/such/file.json"); }) ==
        ErrorCode::IoError);
}

TEST_CASE("demand spec parsing") {
  SchemaGraph schema = SchemaGraph::load_text(kSchema);

  std::vector<JoinDemand> d =
      parse_demand_spec(schema, " publication.title , Author ,publication ");
  REQUIRE(d.size() == 3);
  CHECK(d[0].relation == "publication");
  CHECK(d[0].attribute == "publication.title");
  CHECK(d[1].relation == "author");
  CHECK(d[1].attribute.empty());
  CHECK(d[2].relation == "publication");
  CHECK(d[2].attribute.empty());

  CHECK(thrown_code([&] { parse_demand_spec(schema, "reviewer"); }) ==
        ErrorCode::UnknownElement);
  CHECK(thrown_code([&] { parse_demand_spec(schema, "author.phone"); }) ==
        ErrorCode::UnknownElement);
  CHECK(thrown_code([&] { parse_demand_spec(schema, " , ,"); }) ==
        ErrorCode::InvalidArgument);
}
