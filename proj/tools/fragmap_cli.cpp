#include <cstdint>
#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include <fragmap/fragmap.h>

namespace {

const std::map<std::string, int> kObscurityNames = {
    {"full", FRAGMAP_OBSCURITY_FULL},
    {"noconst", FRAGMAP_OBSCURITY_NOCONST},
    {"noconstop", FRAGMAP_OBSCURITY_NOCONSTOP}};

const std::map<std::string, int> kWeightNames = {
    {"default", FRAGMAP_WEIGHTS_DEFAULT}, {"log", FRAGMAP_WEIGHTS_LOG}};

struct CliConfig {
  std::string schema;
  std::string data;
  std::string log;
  std::string qfg;
  std::string embeddings;
  std::string input;  // tasks file or demand bag, per subcommand
  fragmap_params params;
  bool json = false;

  CliConfig() { fragmap_params_init(&params); }
};

int fail_with(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, fragmap_last_error());
  return 1;
}

std::string json_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// RAII wrappers keep the handler bodies linear.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
  T** slot() { return &ptr; }
  operator T*() const { return ptr; }
};

using CatalogHandle = Handle<fragmap_catalog, fragmap_catalog_free>;
using SimHandle = Handle<fragmap_sim, fragmap_sim_free>;
using QfgHandle = Handle<fragmap_qfg, fragmap_qfg_free>;
using TasksHandle = Handle<fragmap_tasks, fragmap_tasks_free>;
using ResultHandle = Handle<fragmap_result, fragmap_result_free>;
using PathsHandle = Handle<fragmap_paths, fragmap_paths_free>;
using ReportHandle = Handle<fragmap_report, fragmap_report_free>;

int cmd_build_qfg(const CliConfig& cfg) {
  if (!cfg.schema.empty()) {
    CatalogHandle catalog;
    if (fragmap_catalog_open(cfg.schema.c_str(), nullptr, catalog.slot()) !=
        FRAGMAP_OK)
      return fail_with("cannot open schema");
  }
  QfgHandle qfg;
  if (fragmap_qfg_build_from_log(cfg.log.c_str(), cfg.params.obscurity,
                                 qfg.slot()) != FRAGMAP_OK)
    return fail_with("cannot build fragment graph");
  for (uint64_t i = 0; i < fragmap_qfg_skipped(qfg); ++i)
    std::fprintf(stderr, "warning: skipped statement: %s\n",
                 fragmap_qfg_skip_reason(qfg, i));
  if (fragmap_qfg_parsed(qfg) == 0)
    std::fprintf(stderr, "warning: no statements parsed; graph is empty\n");
  if (fragmap_qfg_save(qfg, cfg.qfg.c_str()) != FRAGMAP_OK)
    return fail_with("cannot write fragment graph");
  if (cfg.json) {
    std::printf(
        "{\"parsed\": %llu, \"skipped\": %llu, \"queries\": %llu, "
        "\"fragments\": %llu, \"pairs\": %llu}\n",
        (unsigned long long)fragmap_qfg_parsed(qfg),
        (unsigned long long)fragmap_qfg_skipped(qfg),
        (unsigned long long)fragmap_qfg_queries(qfg),
        (unsigned long long)fragmap_qfg_fragments(qfg),
        (unsigned long long)fragmap_qfg_pairs(qfg));
  } else {
    std::printf("parsed %llu statements (%llu skipped)\n",
                (unsigned long long)fragmap_qfg_parsed(qfg),
                (unsigned long long)fragmap_qfg_skipped(qfg));
    std::printf("fragments %llu, co-occurring pairs %llu\n",
                (unsigned long long)fragmap_qfg_fragments(qfg),
                (unsigned long long)fragmap_qfg_pairs(qfg));
  }
  return 0;
}

int open_common(const CliConfig& cfg, CatalogHandle* catalog, SimHandle* sim,
                QfgHandle* qfg) {
  if (fragmap_catalog_open(cfg.schema.c_str(),
                           cfg.data.empty() ? nullptr : cfg.data.c_str(),
                           catalog->slot()) != FRAGMAP_OK)
    return fail_with("cannot open catalog");
  if (fragmap_sim_create(sim->slot()) != FRAGMAP_OK)
    return fail_with("cannot create similarity model");
  if (!cfg.embeddings.empty() &&
      fragmap_sim_load_embeddings(*sim, cfg.embeddings.c_str()) != FRAGMAP_OK)
    return fail_with("cannot load embeddings");
  if (!cfg.qfg.empty() &&
      fragmap_qfg_load(cfg.qfg.c_str(), qfg->slot()) != FRAGMAP_OK)
    return fail_with("cannot load fragment graph");
  return 0;
}

int cmd_translate(const CliConfig& cfg) {
  if (cfg.qfg.empty() && cfg.params.lambda < 1.0) {
    std::fprintf(stderr,
                 "error: lambda < 1 scores against the query log; pass --qfg "
                 "or set --lambda 1\n");
    return 1;
  }
  CatalogHandle catalog;
  SimHandle sim;
  QfgHandle qfg;
  if (int rc = open_common(cfg, &catalog, &sim, &qfg)) return rc;
  TasksHandle tasks;
  if (fragmap_tasks_load(cfg.input.c_str(), tasks.slot()) != FRAGMAP_OK)
    return fail_with("cannot load tasks");

  if (cfg.json) std::printf("[\n");
  uint64_t count = fragmap_tasks_count(tasks);
  for (uint64_t i = 0; i < count; ++i) {
    ResultHandle result;
    fragmap_status status = fragmap_translate(catalog, sim, qfg, tasks, i,
                                              &cfg.params, result.slot());
    const char* nlq = fragmap_tasks_nlq(tasks, i);
    if (cfg.json) {
      std::printf("{\"record\": %llu, \"nlq\": \"%s\", ",
                  (unsigned long long)(i + 1), json_escape(nlq).c_str());
      if (status != FRAGMAP_OK)
        std::printf("\"failed\": true, \"error\": \"%s\"}",
                    json_escape(fragmap_last_error()).c_str());
      else
        std::printf("\"failed\": false, \"output\": %s}",
                    fragmap_result_json(result));
      std::printf(i + 1 < count ? ",\n" : "\n");
      continue;
    }
    if (*nlq)
      std::printf("record %llu: %s\n", (unsigned long long)(i + 1), nlq);
    else
      std::printf("record %llu:\n", (unsigned long long)(i + 1));
    if (status != FRAGMAP_OK) {
      // keep going: one unmappable record must not sink the batch
      std::printf("  FAILED (%s): %s\n", fragmap_status_name(status),
                  fragmap_last_error());
      continue;
    }
    if (fragmap_result_tied(result))
      std::printf("  tie at rank 1\n");
    for (uint64_t r = 0; r < fragmap_result_count(result); ++r)
      std::printf("  %.6f  %s\n", fragmap_result_score(result, r),
                  fragmap_result_sql(result, r));
  }
  if (cfg.json) std::printf("]\n");
  return 0;
}

int cmd_infer_joins(const CliConfig& cfg) {
  CatalogHandle catalog;
  SimHandle sim;
  QfgHandle qfg;
  if (int rc = open_common(cfg, &catalog, &sim, &qfg)) return rc;
  PathsHandle paths;
  if (fragmap_infer_joins(catalog, qfg, cfg.input.c_str(), &cfg.params,
                          paths.slot()) != FRAGMAP_OK)
    return fail_with("cannot infer join paths");
  if (cfg.json) {
    std::fputs(fragmap_paths_json(paths), stdout);
    return 0;
  }
  for (uint64_t i = 0; i < fragmap_paths_count(paths); ++i) {
    std::printf("path %llu: %s\n", (unsigned long long)(i + 1),
                fragmap_paths_relations(paths, i));
    if (fragmap_paths_edge_count(paths, i))
      std::printf("  joins: %s\n", fragmap_paths_joins(paths, i));
    std::printf("  weight %.6f, likelihood %.6f\n",
                fragmap_paths_weight(paths, i),
                fragmap_paths_likelihood(paths, i));
  }
  return 0;
}

int cmd_evaluate(const CliConfig& cfg) {
  CatalogHandle catalog;
  SimHandle sim;
  QfgHandle qfg;
  if (int rc = open_common(cfg, &catalog, &sim, &qfg)) return rc;
  TasksHandle bench;
  if (fragmap_tasks_load(cfg.input.c_str(), bench.slot()) != FRAGMAP_OK)
    return fail_with("cannot load benchmark");
  ReportHandle report;
  if (fragmap_evaluate(catalog, sim, bench, &cfg.params, report.slot()) !=
      FRAGMAP_OK)
    return fail_with("evaluation failed");
  std::fputs(cfg.json ? fragmap_report_json(report)
                      : fragmap_report_text(report),
             stdout);
  return 0;
}

void add_mapping_flags(CLI::App* cmd, CliConfig* cfg) {
  cmd->add_option("--kappa", cfg->params.kappa,
                  "candidates kept per keyword")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  cmd->add_option("--lambda", cfg->params.lambda,
                  "similarity weight in the score blend")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

void add_join_flags(CLI::App* cmd, CliConfig* cfg) {
  cmd->add_option("--weights", cfg->params.weights,
                  "join edge weights: default or log")
      ->transform(CLI::CheckedTransformer(kWeightNames, CLI::ignore_case))
      ->default_str("log");
  cmd->add_option("--k-paths", cfg->params.k_paths,
                  "join paths ranked per configuration")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"query-log-driven keyword mapping and join inference"};
  app.require_subcommand(1);
  CliConfig cfg;

  CLI::App* build = app.add_subcommand(
      "build-qfg", "mine a SQL log into a fragment co-occurrence graph");
  build->add_option("--log", cfg.log, "SQL query log, one statement per ';'")
      ->required();
  build->add_option("--qfg", cfg.qfg, "output graph file")->required();
  build->add_option("--schema", cfg.schema, "schema file (validated only)");
  build->add_option("--obscurity", cfg.params.obscurity,
                    "fragment obscurity: full, noconst or noconstop")
      ->transform(CLI::CheckedTransformer(kObscurityNames, CLI::ignore_case))
      ->default_str("noconstop");
  build->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* translate = app.add_subcommand(
      "translate", "rank SQL translations for keyword task records");
  translate->add_option("tasks", cfg.input, "task record file")->required();
  translate->add_option("--schema", cfg.schema, "schema file")->required();
  translate->add_option("--data", cfg.data, "directory of relation .tsv files");
  translate->add_option("--qfg", cfg.qfg, "fragment graph file");
  translate->add_option("--embeddings", cfg.embeddings,
                        "word embedding vectors");
  add_mapping_flags(translate, &cfg);
  add_join_flags(translate, &cfg);
  translate->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* joins = app.add_subcommand(
      "infer-joins", "rank join paths connecting a bag of demands");
  joins->add_option("bag", cfg.input,
                    "comma-separated relations or qualified attributes")
      ->required();
  joins->add_option("--schema", cfg.schema, "schema file")->required();
  joins->add_option("--qfg", cfg.qfg, "fragment graph file");
  add_join_flags(joins, &cfg);
  joins->add_flag("--json", cfg.json, "machine-readable output");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "cross-validate translation accuracy on a benchmark");
  evaluate->add_option("benchmark", cfg.input, "benchmark record file")
      ->required();
  evaluate->add_option("--schema", cfg.schema, "schema file")->required();
  evaluate->add_option("--data", cfg.data,
                       "directory of relation .tsv files");
  evaluate->add_option("--embeddings", cfg.embeddings,
                       "word embedding vectors");
  evaluate->add_option("--obscurity", cfg.params.obscurity,
                       "fragment obscurity for the trial graphs")
      ->transform(CLI::CheckedTransformer(kObscurityNames, CLI::ignore_case))
      ->default_str("noconstop");
  evaluate->add_option("--folds", cfg.params.folds, "cross-validation folds")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  evaluate->add_option("--seed", cfg.params.seed, "fold shuffle seed")
      ->capture_default_str();
  add_mapping_flags(evaluate, &cfg);
  add_join_flags(evaluate, &cfg);
  evaluate->add_flag("--json", cfg.json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  if (build->parsed()) return cmd_build_qfg(cfg);
  if (translate->parsed()) return cmd_translate(cfg);
  if (joins->parsed()) return cmd_infer_joins(cfg);
  return cmd_evaluate(cfg);
}
