#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/taskio.hpp"
#include "core/translator.hpp"

namespace fragmap {

struct EvalParams {
  int folds = 4;
  uint64_t seed = 42;
  ObscurityLevel level = ObscurityLevel::NoConstOp;
  TranslateParams translate;
};

// Scoring outcome for one benchmark record in its test fold.
struct RecordOutcome {
  size_t record = 0;     // index into benchmark.records
  bool kw_correct = false;
  bool fq_correct = false;
  bool failed = false;   // translation raised an error
  std::string failure;   // diagnostic when failed
  std::string top_sql;   // rank-1 SQL when one was produced
  bool tied = false;
};

// One fold held out as the test set; the rest supply the query log.
struct TrialResult {
  std::vector<size_t> train;  // records whose gold SQL built the trial graph
  std::vector<size_t> test;   // records scored against that graph
  std::vector<RecordOutcome> outcomes;  // one per test record, same order
};

struct EvalReport {
  std::string benchmark;
  EvalParams params;
  size_t records = 0;
  size_t kw_correct = 0;
  size_t fq_correct = 0;
  size_t failures = 0;
  double kw_accuracy = 0.0;  // percent over all records
  double fq_accuracy = 0.0;
  std::vector<TrialResult> trials;
};

// True when every non-relation keyword's chosen fragment (the predicate for
// paired keywords) equals the gold expression. Uses the top configuration.
bool keywords_match_gold(const MappingResult& mapping,
                         const std::vector<std::string>& gold_map);

// kw per keywords_match_gold; fq requires an untied rank-1 result whose SQL
// is equivalent to the gold query.
std::pair<bool, bool> score_record(const TranslateOutput& output,
                                   const TaskRecord& record);

// Shuffle the record indices with the seed, split them into `folds` nearly
// equal contiguous folds, and for each fold build a fragment graph from the
// other folds' gold SQL and translate the held-out records against it.
// Every record needs gold_sql and gold_map.
EvalReport cross_validate(const Benchmark& bench, const Catalog& catalog,
                          const SimilarityModel& sim, const EvalParams& params);

std::string render_report_text(const EvalReport& report);
std::string render_report_json(const EvalReport& report);

}  // namespace fragmap
