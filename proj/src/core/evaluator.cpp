#include "core/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/qfg.hpp"

namespace fragmap {

namespace {

std::string percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", value);
  return buf;
}

// Deterministic shuffle; std::shuffle's dealing is not pinned down by the
// standard, so spell the swaps out.
std::vector<size_t> shuffled_indices(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  for (size_t i = n - 1; i > 0; --i) {
    size_t j = rng() % (i + 1);
    std::swap(order[i], order[j]);
  }
  return order;
}

}  // namespace

bool keywords_match_gold(const MappingResult& mapping,
                         const std::vector<std::string>& gold_map) {
  if (mapping.configs.empty()) return false;
  if (gold_map.size() != mapping.keywords.size())
    fail(ErrorCode::InvalidArgument, "gold mapping size mismatch");
  const Configuration& top = mapping.configs[0];
  for (size_t i = 0; i < mapping.keywords.size(); ++i) {
    if (mapping.keywords[i].task.context == MappingContext::From) continue;
    if (mapping.chosen(top, i).fragment.expression != gold_map[i])
      return false;
  }
  return true;
}

std::pair<bool, bool> score_record(const TranslateOutput& output,
                                   const TaskRecord& record) {
  bool kw = keywords_match_gold(output.mapping, record.gold_map);
  bool fq = !output.tied && !output.ranked.empty() &&
            sql_equivalent(output.ranked[0].sql, record.gold_sql);
  return {kw, fq};
}

EvalReport cross_validate(const Benchmark& bench, const Catalog& catalog,
                          const SimilarityModel& sim,
                          const EvalParams& params) {
  if (params.folds < 2)
    fail(ErrorCode::InvalidArgument, "cross-validation needs at least 2 folds");
  size_t n = bench.records.size();
  if (n < static_cast<size_t>(params.folds))
    fail(ErrorCode::InvalidArgument,
         "benchmark has " + std::to_string(n) + " records but " +
             std::to_string(params.folds) + " folds");
  for (size_t i = 0; i < n; ++i)
    if (bench.records[i].gold_sql.empty() || bench.records[i].gold_map.empty())
      fail(ErrorCode::FormatError,
           "record " + std::to_string(i + 1) +
               ": evaluation needs gold_sql and gold_map");

  std::vector<size_t> order = shuffled_indices(n, params.seed);
  size_t folds = static_cast<size_t>(params.folds);
  size_t base = n / folds, extra = n % folds;

  EvalReport report;
  report.benchmark = bench.name;
  report.params = params;
  report.records = n;

  size_t begin = 0;
  for (size_t f = 0; f < folds; ++f) {
    size_t size = base + (f < extra ? 1 : 0);
    TrialResult trial;
    for (size_t pos = 0; pos < n; ++pos) {
      if (pos >= begin && pos < begin + size) trial.test.push_back(order[pos]);
      else trial.train.push_back(order[pos]);
    }
    begin += size;
    std::sort(trial.train.begin(), trial.train.end());
    std::sort(trial.test.begin(), trial.test.end());

    FragmentGraph graph(params.level);
    for (size_t idx : trial.train)
      graph.add_query(extract_fragments(parse_query(bench.records[idx].gold_sql)));

    for (size_t idx : trial.test) {
      const TaskRecord& rec = bench.records[idx];
      RecordOutcome o;
      o.record = idx;
      try {
        TranslateOutput out =
            translate(catalog, sim, &graph, rec.tasks, params.translate);
        auto [kw, fq] = score_record(out, rec);
        o.kw_correct = kw;
        o.fq_correct = fq;
        o.tied = out.tied;
        if (!out.ranked.empty()) o.top_sql = out.ranked[0].sql;
      } catch (const Error& e) {
        o.failed = true;
        o.failure = e.what();
        // joins may fail after a scoreable keyword mapping was found
        try {
          MappingResult m = map_keywords(catalog, sim, &graph, rec.tasks,
                                         params.translate.mapper);
          o.kw_correct = keywords_match_gold(m, rec.gold_map);
        } catch (const Error&) {
        }
      }
      report.kw_correct += o.kw_correct;
      report.fq_correct += o.fq_correct;
      report.failures += o.failed;
      trial.outcomes.push_back(std::move(o));
    }
    report.trials.push_back(std::move(trial));
  }

  report.kw_accuracy = 100.0 * static_cast<double>(report.kw_correct) /
                       static_cast<double>(n);
  report.fq_accuracy = 100.0 * static_cast<double>(report.fq_correct) /
                       static_cast<double>(n);
  return report;
}

std::string render_report_text(const EvalReport& report) {
  std::ostringstream out;
  out << "benchmark '" << report.benchmark << "': " << report.records
      << " records, " << report.params.folds << " folds, seed "
      << report.params.seed << "\n";
  out << "obscurity " << obscurity_name(report.params.level) << ", kappa "
      << report.params.translate.mapper.kappa << ", lambda "
      << report.params.translate.mapper.lambda << ", weights "
      << weight_mode_name(report.params.translate.weights) << ", k-paths "
      << report.params.translate.k_paths << "\n";
  for (size_t t = 0; t < report.trials.size(); ++t) {
    const TrialResult& trial = report.trials[t];
    out << "trial " << (t + 1) << ": train " << trial.train.size()
        << ", test " << trial.test.size() << "\n";
    for (const RecordOutcome& o : trial.outcomes) {
      out << "  record " << (o.record + 1);
      if (o.failed) {
        out << " FAILED (kw=" << (o.kw_correct ? "yes" : "no")
            << "): " << o.failure << "\n";
        continue;
      }
      out << " kw=" << (o.kw_correct ? "yes" : "no")
          << " fq=" << (o.fq_correct ? "yes" : "no");
      if (o.tied) out << " tied";
      out << "  " << o.top_sql << "\n";
    }
  }
  out << "KW accuracy " << percent(report.kw_accuracy) << "% ("
      << report.kw_correct << "/" << report.records << ")\n";
  out << "FQ accuracy " << percent(report.fq_accuracy) << "% ("
      << report.fq_correct << "/" << report.records << ")\n";
  if (report.failures)
    out << "failures " << report.failures << "\n";
  return out.str();
}

std::string render_report_json(const EvalReport& report) {
  nlohmann::json j;
  j["benchmark"] = report.benchmark;
  j["records"] = report.records;
  j["folds"] = report.params.folds;
  j["seed"] = report.params.seed;
  j["obscurity"] = obscurity_name(report.params.level);
  j["kappa"] = report.params.translate.mapper.kappa;
  j["lambda"] = report.params.translate.mapper.lambda;
  j["weights"] = weight_mode_name(report.params.translate.weights);
  j["k_paths"] = report.params.translate.k_paths;
  j["kw_correct"] = report.kw_correct;
  j["fq_correct"] = report.fq_correct;
  j["failures"] = report.failures;
  j["kw_accuracy"] = report.kw_accuracy;
  j["fq_accuracy"] = report.fq_accuracy;
  j["trials"] = nlohmann::json::array();
  for (const TrialResult& trial : report.trials) {
    nlohmann::json jt;
    jt["train"] = trial.train;
    jt["test"] = trial.test;
    jt["outcomes"] = nlohmann::json::array();
    for (const RecordOutcome& o : trial.outcomes) {
      nlohmann::json jo;
      jo["record"] = o.record;
      jo["kw_correct"] = o.kw_correct;
      jo["fq_correct"] = o.fq_correct;
      jo["failed"] = o.failed;
      if (o.failed) jo["failure"] = o.failure;
      if (!o.top_sql.empty()) jo["top_sql"] = o.top_sql;
      jo["tied"] = o.tied;
      jt["outcomes"].push_back(std::move(jo));
    }
    j["trials"].push_back(std::move(jt));
  }
  return j.dump(2) + "\n";
}

}  // namespace fragmap
