#include "core/taskio.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/sqlparse.hpp"
#include "core/text.hpp"

namespace fragmap {

namespace {

using nlohmann::json;

const std::set<std::string> kOps = {"=", "<", ">", "<=", ">=", "<>", "like"};
const std::set<std::string> kAggregates = {"count", "sum", "avg", "min",
                                           "max"};

[[noreturn]] void bad_format(size_t record, const std::string& what) {
  fail(ErrorCode::FormatError,
       "record " + std::to_string(record + 1) + ": " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                size_t record, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      bad_format(record, "unknown " + where + " field '" + key + "'");
}

KeywordTask parse_keyword(const json& entry, size_t record) {
  if (!entry.is_object()) bad_format(record, "keyword entry is not an object");
  check_keys(entry, {"keyword", "context", "op", "aggregates", "group"},
             record, "keyword");
  KeywordTask task;
  if (!entry.contains("keyword") || !entry["keyword"].is_string() ||
      entry["keyword"].get<std::string>().empty())
    bad_format(record, "keyword entry needs a non-empty \"keyword\"");
  task.keyword = entry["keyword"].get<std::string>();

  if (entry.contains("context")) {
    if (!entry["context"].is_string())
      bad_format(record, "\"context\" must be a string");
    if (!parse_mapping_context(entry["context"].get<std::string>(),
                               &task.context))
      bad_format(record, "unknown context '" +
                             entry["context"].get<std::string>() + "'");
  }

  bool predicate_ctx = task.context == MappingContext::Where ||
                       task.context == MappingContext::Pair;
  bool projection_ctx = task.context == MappingContext::Select ||
                        task.context == MappingContext::Pair;
  if (entry.contains("op")) {
    if (!predicate_ctx)
      bad_format(record, "\"op\" fits only where/pair keywords");
    if (!entry["op"].is_string()) bad_format(record, "\"op\" must be a string");
    std::string op = to_lower(entry["op"].get<std::string>());
    if (op == "!=") op = "<>";
    if (!kOps.count(op)) bad_format(record, "unknown operator '" + op + "'");
    task.op = op;
  }
  if (entry.contains("aggregates")) {
    if (!projection_ctx)
      bad_format(record, "\"aggregates\" fits only select/pair keywords");
    if (!entry["aggregates"].is_array())
      bad_format(record, "\"aggregates\" must be an array");
    for (const json& agg : entry["aggregates"]) {
      if (!agg.is_string())
        bad_format(record, "aggregates must be strings");
      std::string name = to_lower(agg.get<std::string>());
      if (!kAggregates.count(name))
        bad_format(record, "unknown aggregate '" + name + "'");
      task.aggregates.push_back(name);
    }
  }
  if (entry.contains("group")) {
    if (!projection_ctx)
      bad_format(record, "\"group\" fits only select/pair keywords");
    if (!entry["group"].is_boolean())
      bad_format(record, "\"group\" must be a boolean");
    task.group = entry["group"].get<bool>();
  }
  return task;
}

TaskRecord parse_record(const json& entry, size_t record) {
  if (!entry.is_object()) bad_format(record, "record is not an object");
  check_keys(entry, {"nlq", "keywords", "gold_sql", "gold_map"}, record,
             "record");
  TaskRecord out;
  if (entry.contains("nlq")) {
    if (!entry["nlq"].is_string()) bad_format(record, "\"nlq\" must be a string");
    out.nlq = entry["nlq"].get<std::string>();
  }
  if (!entry.contains("keywords") || !entry["keywords"].is_array() ||
      entry["keywords"].empty())
    bad_format(record, "needs a non-empty \"keywords\" array");
  for (const json& kw : entry["keywords"])
    out.tasks.push_back(parse_keyword(kw, record));

  if (entry.contains("gold_sql")) {
    if (!entry["gold_sql"].is_string())
      bad_format(record, "\"gold_sql\" must be a string");
    out.gold_sql = entry["gold_sql"].get<std::string>();
    if (!out.gold_sql.empty()) {
      try {
        parse_query(out.gold_sql);
      } catch (const Error& e) {
        bad_format(record, std::string("gold sql: ") + e.what());
      }
    }
  }
  if (entry.contains("gold_map")) {
    if (!entry["gold_map"].is_array())
      bad_format(record, "\"gold_map\" must be an array");
    for (const json& m : entry["gold_map"]) {
      if (!m.is_string()) bad_format(record, "gold_map entries must be strings");
      out.gold_map.push_back(m.get<std::string>());
    }
    if (out.gold_map.size() != out.tasks.size())
      bad_format(record, "gold_map must list one entry per keyword");
  }
  return out;
}

}  // namespace

Benchmark load_benchmark_text(const std::string& text,
                              const std::string& fallback_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError,
         std::string("benchmark is not valid JSON: ") + e.what());
  }
  Benchmark bench;
  bench.name = fallback_name;
  const json* records = &root;
  if (root.is_object()) {
    check_keys(root, {"name", "records"}, 0, "benchmark");
    if (root.contains("name")) {
      if (!root["name"].is_string())
        fail(ErrorCode::FormatError, "benchmark \"name\" must be a string");
      bench.name = root["name"].get<std::string>();
    }
    if (!root.contains("records") || !root["records"].is_array())
      fail(ErrorCode::FormatError, "benchmark needs a \"records\" array");
    records = &root["records"];
  } else if (!root.is_array()) {
    fail(ErrorCode::FormatError, "benchmark must be an object or an array");
  }
  for (size_t i = 0; i < records->size(); ++i)
    bench.records.push_back(parse_record((*records)[i], i));
  return bench;
}

Benchmark load_benchmark_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_benchmark_text(buffer.str(),
                             std::filesystem::path(path).stem().string());
}

std::vector<JoinDemand> parse_demand_spec(const SchemaGraph& schema,
                                          const std::string& spec) {
  std::vector<JoinDemand> demands;
  for (const std::string& raw : split(spec, ',')) {
    std::string token = to_lower(trim(raw));
    if (token.empty()) continue;
    if (token.find('.') != std::string::npos) {
      demands.push_back(JoinDemand::for_attribute(schema, token));
    } else {
      if (!schema.has_relation(token))
        fail(ErrorCode::UnknownElement, "unknown relation '" + token + "'");
      demands.push_back(JoinDemand::for_relation(token));
    }
  }
  if (demands.empty())
    fail(ErrorCode::InvalidArgument, "empty demand bag");
  return demands;
}

}  // namespace fragmap
