#pragma once

#include <string>
#include <vector>

#include "core/joingraph.hpp"
#include "core/mapper.hpp"

namespace fragmap {

// One natural-language query turned into keyword tasks, with optional ground
// truth for scoring: the intended SQL and the intended fragment expression
// per keyword (relation name for relation keywords; a Pair's entry is its
// predicate).
struct TaskRecord {
  std::string nlq;
  std::vector<KeywordTask> tasks;
  std::string gold_sql;               // empty when not supplied
  std::vector<std::string> gold_map;  // empty or one entry per keyword
};

struct Benchmark {
  std::string name;
  std::vector<TaskRecord> records;
};

// Parse a benchmark/task file: either {"name": ..., "records": [...]} or a
// bare record array. Each record holds "keywords" (list of {"keyword",
// "context", "op", "aggregates", "group"}) plus optional "nlq", "gold_sql",
// "gold_map". "op" fits where/pair keywords only; "aggregates" and "group"
// fit select/pair keywords only. Supplied gold SQL must parse.
Benchmark load_benchmark_text(const std::string& text,
                              const std::string& fallback_name = "benchmark");
Benchmark load_benchmark_file(const std::string& path);

// Parse a comma-separated demand bag: each entry is a relation name or a
// qualified attribute, checked against the schema.
std::vector<JoinDemand> parse_demand_spec(const SchemaGraph& schema,
                                          const std::string& spec);

}  // namespace fragmap
