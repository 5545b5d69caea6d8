#include "fragmap/fragmap.h"

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/evaluator.hpp"
#include "core/qfg.hpp"
#include "core/taskio.hpp"
#include "core/translator.hpp"

using namespace fragmap;

namespace {

thread_local std::string g_last_error;

fragmap_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return FRAGMAP_IO_ERROR;
    case ErrorCode::FormatError: return FRAGMAP_FORMAT_ERROR;
    case ErrorCode::ParseError: return FRAGMAP_PARSE_ERROR;
    case ErrorCode::UnsupportedQuery: return FRAGMAP_UNSUPPORTED_QUERY;
    case ErrorCode::ObscurityMismatch: return FRAGMAP_OBSCURITY_MISMATCH;
    case ErrorCode::MissingPrimaryKey: return FRAGMAP_MISSING_PRIMARY_KEY;
    case ErrorCode::NotPlainAttribute: return FRAGMAP_NOT_PLAIN_ATTRIBUTE;
    case ErrorCode::UnknownElement: return FRAGMAP_UNKNOWN_ELEMENT;
    case ErrorCode::NoCandidates: return FRAGMAP_NO_CANDIDATES;
    case ErrorCode::CombinatorialLimit: return FRAGMAP_COMBINATORIAL_LIMIT;
    case ErrorCode::ZeroScore: return FRAGMAP_ZERO_SCORE;
    case ErrorCode::Disconnected: return FRAGMAP_DISCONNECTED;
    case ErrorCode::InvalidArgument: return FRAGMAP_INVALID_ARGUMENT;
    case ErrorCode::Internal: return FRAGMAP_INTERNAL;
  }
  return FRAGMAP_INTERNAL;
}

template <typename Fn>
fragmap_status wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FRAGMAP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FRAGMAP_INTERNAL;
  }
}

fragmap_status arg_error(const std::string& message) {
  g_last_error = message;
  return FRAGMAP_INVALID_ARGUMENT;
}

bool to_level(int value, ObscurityLevel* out) {
  switch (value) {
    case FRAGMAP_OBSCURITY_FULL: *out = ObscurityLevel::Full; return true;
    case FRAGMAP_OBSCURITY_NOCONST: *out = ObscurityLevel::NoConst; return true;
    case FRAGMAP_OBSCURITY_NOCONSTOP:
      *out = ObscurityLevel::NoConstOp;
      return true;
  }
  return false;
}

bool to_weights(int value, WeightMode* out) {
  switch (value) {
    case FRAGMAP_WEIGHTS_DEFAULT: *out = WeightMode::Default; return true;
    case FRAGMAP_WEIGHTS_LOG: *out = WeightMode::Log; return true;
  }
  return false;
}

}  // namespace

struct fragmap_catalog {
  Catalog catalog;
};

struct fragmap_sim {
  SimilarityModel sim;
};

struct fragmap_qfg {
  FragmentGraph graph;
  LogBuildStats stats;
};

struct fragmap_tasks {
  Benchmark bench;
};

struct fragmap_result {
  TranslateOutput output;
  std::string json;
};

struct fragmap_paths {
  JoinInference inference;
  std::vector<std::string> relations;
  std::vector<std::string> joins;
  std::string json;
};

struct fragmap_report {
  EvalReport report;
  std::string text;
  std::string json;
};

extern "C" {

void fragmap_params_init(fragmap_params* params) {
  if (!params) return;
  params->kappa = 5;
  params->lambda = 0.8;
  params->obscurity = FRAGMAP_OBSCURITY_NOCONSTOP;
  params->folds = 4;
  params->seed = 42;
  params->k_paths = 3;
  params->weights = FRAGMAP_WEIGHTS_LOG;
}

const char* fragmap_version(void) { return "1.0.0"; }

const char* fragmap_status_name(fragmap_status status) {
  switch (status) {
    case FRAGMAP_OK: return "ok";
    case FRAGMAP_IO_ERROR: return "io error";
    case FRAGMAP_FORMAT_ERROR: return "format error";
    case FRAGMAP_PARSE_ERROR: return "parse error";
    case FRAGMAP_UNSUPPORTED_QUERY: return "unsupported query";
    case FRAGMAP_OBSCURITY_MISMATCH: return "obscurity mismatch";
    case FRAGMAP_MISSING_PRIMARY_KEY: return "missing primary key";
    case FRAGMAP_NOT_PLAIN_ATTRIBUTE: return "not a plain attribute";
    case FRAGMAP_UNKNOWN_ELEMENT: return "unknown element";
    case FRAGMAP_NO_CANDIDATES: return "no candidates";
    case FRAGMAP_COMBINATORIAL_LIMIT: return "combinatorial limit";
    case FRAGMAP_ZERO_SCORE: return "zero score";
    case FRAGMAP_DISCONNECTED: return "disconnected";
    case FRAGMAP_INVALID_ARGUMENT: return "invalid argument";
    case FRAGMAP_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fragmap_last_error(void) { return g_last_error.c_str(); }

/* --- catalog ------------------------------------------------------------- */

fragmap_status fragmap_catalog_open(const char* schema_path,
                                    const char* data_dir,
                                    fragmap_catalog** out) {
  if (!schema_path || !out) return arg_error("schema path and out required");
  *out = nullptr;
  return wrap([&] {
    auto handle = std::make_unique<fragmap_catalog>();
    handle->catalog = open_catalog(schema_path, data_dir ? data_dir : "");
    *out = handle.release();
  });
}

uint64_t fragmap_catalog_relations(const fragmap_catalog* catalog) {
  return catalog ? catalog->catalog.schema.relations().size() : 0;
}

uint64_t fragmap_catalog_values(const fragmap_catalog* catalog) {
  return catalog ? catalog->catalog.index.indexed_value_count() : 0;
}

void fragmap_catalog_free(fragmap_catalog* catalog) { delete catalog; }

/* --- similarity model ----------------------------------------------------- */

fragmap_status fragmap_sim_create(fragmap_sim** out) {
  if (!out) return arg_error("out required");
  *out = new fragmap_sim();
  g_last_error.clear();
  return FRAGMAP_OK;
}

fragmap_status fragmap_sim_load_embeddings(fragmap_sim* sim,
                                           const char* path) {
  if (!sim || !path) return arg_error("sim and path required");
  return wrap([&] { sim->sim = SimilarityModel::load_embeddings_file(path); });
}

void fragmap_sim_free(fragmap_sim* sim) { delete sim; }

/* --- query fragment graph -------------------------------------------------- */

fragmap_status fragmap_qfg_build_from_log(const char* log_path, int obscurity,
                                          fragmap_qfg** out) {
  if (!log_path || !out) return arg_error("log path and out required");
  ObscurityLevel level;
  if (!to_level(obscurity, &level)) return arg_error("bad obscurity value");
  *out = nullptr;
  return wrap([&] {
    auto handle = std::make_unique<fragmap_qfg>();
    handle->graph =
        build_graph_from_log_file(log_path, level, &handle->stats);
    *out = handle.release();
  });
}

fragmap_status fragmap_qfg_load(const char* path, fragmap_qfg** out) {
  if (!path || !out) return arg_error("path and out required");
  *out = nullptr;
  return wrap([&] {
    auto handle = std::make_unique<fragmap_qfg>();
    handle->graph = FragmentGraph::load_file(path);
    *out = handle.release();
  });
}

fragmap_status fragmap_qfg_save(const fragmap_qfg* qfg, const char* path) {
  if (!qfg || !path) return arg_error("qfg and path required");
  return wrap([&] { qfg->graph.save_file(path); });
}

int fragmap_qfg_obscurity(const fragmap_qfg* qfg) {
  if (!qfg) return -1;
  switch (qfg->graph.level()) {
    case ObscurityLevel::Full: return FRAGMAP_OBSCURITY_FULL;
    case ObscurityLevel::NoConst: return FRAGMAP_OBSCURITY_NOCONST;
    case ObscurityLevel::NoConstOp: return FRAGMAP_OBSCURITY_NOCONSTOP;
  }
  return -1;
}

uint64_t fragmap_qfg_fragments(const fragmap_qfg* qfg) {
  return qfg ? qfg->graph.fragment_count() : 0;
}

uint64_t fragmap_qfg_pairs(const fragmap_qfg* qfg) {
  return qfg ? qfg->graph.pair_count() : 0;
}

uint64_t fragmap_qfg_queries(const fragmap_qfg* qfg) {
  return qfg ? qfg->graph.query_count() : 0;
}

uint64_t fragmap_qfg_parsed(const fragmap_qfg* qfg) {
  return qfg ? qfg->stats.parsed : 0;
}

uint64_t fragmap_qfg_skipped(const fragmap_qfg* qfg) {
  return qfg ? qfg->stats.skipped : 0;
}

const char* fragmap_qfg_skip_reason(const fragmap_qfg* qfg, uint64_t index) {
  if (!qfg || index >= qfg->stats.skip_reasons.size()) return nullptr;
  return qfg->stats.skip_reasons[index].c_str();
}

void fragmap_qfg_free(fragmap_qfg* qfg) { delete qfg; }

/* --- tasks ----------------------------------------------------------------- */

fragmap_status fragmap_tasks_load(const char* path, fragmap_tasks** out) {
  if (!path || !out) return arg_error("path and out required");
  *out = nullptr;
  return wrap([&] {
    auto handle = std::make_unique<fragmap_tasks>();
    handle->bench = load_benchmark_file(path);
    *out = handle.release();
  });
}

const char* fragmap_tasks_name(const fragmap_tasks* tasks) {
  return tasks ? tasks->bench.name.c_str() : nullptr;
}

uint64_t fragmap_tasks_count(const fragmap_tasks* tasks) {
  return tasks ? tasks->bench.records.size() : 0;
}

const char* fragmap_tasks_nlq(const fragmap_tasks* tasks, uint64_t record) {
  if (!tasks || record >= tasks->bench.records.size()) return nullptr;
  return tasks->bench.records[record].nlq.c_str();
}

void fragmap_tasks_free(fragmap_tasks* tasks) { delete tasks; }

/* --- translation ------------------------------------------------------------ */

fragmap_status fragmap_translate(const fragmap_catalog* catalog,
                                 const fragmap_sim* sim,
                                 const fragmap_qfg* qfg,
                                 const fragmap_tasks* tasks, uint64_t record,
                                 const fragmap_params* params,
                                 fragmap_result** out) {
  if (!catalog || !sim || !tasks || !params || !out)
    return arg_error("catalog, sim, tasks, params and out required");
  if (record >= tasks->bench.records.size())
    return arg_error("record index out of range");
  TranslateParams tp;
  tp.mapper.kappa = params->kappa;
  tp.mapper.lambda = params->lambda;
  tp.k_paths = params->k_paths;
  if (!to_weights(params->weights, &tp.weights))
    return arg_error("bad weights value");
  *out = nullptr;
  return wrap([&] {
    auto handle = std::make_unique<fragmap_result>();
    handle->output =
        translate(catalog->catalog, sim->sim, qfg ? &qfg->graph : nullptr,
                  tasks->bench.records[record].tasks, tp);
    nlohmann::json j;
    j["tied"] = handle->output.tied;
    j["translations"] = nlohmann::json::array();
    for (const Translation& t : handle->output.ranked) {
      nlohmann::json jt;
      jt["sql"] = t.sql;
      jt["score"] = t.score;
      jt["config_score"] = t.score_total;
      jt["likelihood"] = t.likelihood;
      j["translations"].push_back(std::move(jt));
    }
    const MappingResult& m = handle->output.mapping;
    j["keywords"] = nlohmann::json::array();
    if (!m.configs.empty())
      for (size_t k = 0; k < m.keywords.size(); ++k) {
        const CandidateMapping& chosen = m.chosen(m.configs[0], k);
        nlohmann::json jk;
        jk["keyword"] = m.keywords[k].task.keyword;
        jk["fragment"] = chosen.fragment.expression;
        jk["sigma"] = chosen.sigma;
        j["keywords"].push_back(std::move(jk));
      }
    handle->json = j.dump(2) + "\n";
    *out = handle.release();
  });
}

uint64_t fragmap_result_count(const fragmap_result* result) {
  return result ? result->output.ranked.size() : 0;
}

const char* fragmap_result_sql(const fragmap_result* result, uint64_t rank) {
  if (!result || rank >= result->output.ranked.size()) return nullptr;
  return result->output.ranked[rank].sql.c_str();
}

double fragmap_result_score(const fragmap_result* result, uint64_t rank) {
  if (!result || rank >= result->output.ranked.size()) return 0.0;
  return result->output.ranked[rank].score;
}

double fragmap_result_config_score(const fragmap_result* result,
                                   uint64_t rank) {
  if (!result || rank >= result->output.ranked.size()) return 0.0;
  return result->output.ranked[rank].score_total;
}

double fragmap_result_likelihood(const fragmap_result* result, uint64_t rank) {
  if (!result || rank >= result->output.ranked.size()) return 0.0;
  return result->output.ranked[rank].likelihood;
}

int fragmap_result_tied(const fragmap_result* result) {
  return result && result->output.tied ? 1 : 0;
}

const char* fragmap_result_json(const fragmap_result* result) {
  return result ? result->json.c_str() : nullptr;
}

void fragmap_result_free(fragmap_result* result) { delete result; }

/* --- join inference ----------------------------------------------------------- */

fragmap_status fragmap_infer_joins(const fragmap_catalog* catalog,
                                   const fragmap_qfg* qfg,
                                   const char* bag_spec,
                                   const fragmap_params* params,
                                   fragmap_paths** out) {
  if (!catalog || !bag_spec || !params || !out)
    return arg_error("catalog, bag_spec, params and out required");
  WeightMode mode;
  if (!to_weights(params->weights, &mode))
    return arg_error("bad weights value");
  if (params->k_paths < 1) return arg_error("k_paths must be positive");
  *out = nullptr;
  return wrap([&] {
    auto handle = std::make_unique<fragmap_paths>();
    std::vector<JoinDemand> demands =
        parse_demand_spec(catalog->catalog.schema, bag_spec);
    handle->inference =
        infer_joins(catalog->catalog.schema, qfg ? &qfg->graph : nullptr,
                    demands, mode, params->k_paths);
    nlohmann::json j;
    j["paths"] = nlohmann::json::array();
    for (const JoinPath& path : handle->inference.paths) {
      std::string rels, joins;
      for (const RelationInstance& v : path.vertices) {
        if (!rels.empty()) rels += ", ";
        rels += v.label();
      }
      for (const JoinGraph::Edge& e : path.edges) {
        if (!joins.empty()) joins += " AND ";
        joins += e.label;
      }
      nlohmann::json jp;
      jp["relations"] = rels;
      jp["joins"] = joins;
      jp["edges"] = path.edges.size();
      jp["weight"] = path.total_weight;
      jp["likelihood"] = path.likelihood;
      j["paths"].push_back(std::move(jp));
      handle->relations.push_back(std::move(rels));
      handle->joins.push_back(std::move(joins));
    }
    handle->json = j.dump(2) + "\n";
    *out = handle.release();
  });
}

uint64_t fragmap_paths_count(const fragmap_paths* paths) {
  return paths ? paths->inference.paths.size() : 0;
}

const char* fragmap_paths_relations(const fragmap_paths* paths,
                                    uint64_t index) {
  if (!paths || index >= paths->relations.size()) return nullptr;
  return paths->relations[index].c_str();
}

const char* fragmap_paths_joins(const fragmap_paths* paths, uint64_t index) {
  if (!paths || index >= paths->joins.size()) return nullptr;
  return paths->joins[index].c_str();
}

uint64_t fragmap_paths_edge_count(const fragmap_paths* paths, uint64_t index) {
  if (!paths || index >= paths->inference.paths.size()) return 0;
  return paths->inference.paths[index].edges.size();
}

double fragmap_paths_weight(const fragmap_paths* paths, uint64_t index) {
  if (!paths || index >= paths->inference.paths.size()) return 0.0;
  return paths->inference.paths[index].total_weight;
}

double fragmap_paths_likelihood(const fragmap_paths* paths, uint64_t index) {
  if (!paths || index >= paths->inference.paths.size()) return 0.0;
  return paths->inference.paths[index].likelihood;
}

const char* fragmap_paths_json(const fragmap_paths* paths) {
  return paths ? paths->json.c_str() : nullptr;
}

void fragmap_paths_free(fragmap_paths* paths) { delete paths; }

/* --- evaluation ------------------------------------------------------------------ */

fragmap_status fragmap_evaluate(const fragmap_catalog* catalog,
                                const fragmap_sim* sim,
                                const fragmap_tasks* tasks,
                                const fragmap_params* params,
                                fragmap_report** out) {
  if (!catalog || !sim || !tasks || !params || !out)
    return arg_error("catalog, sim, tasks, params and out required");
  EvalParams ep;
  ep.folds = params->folds;
  ep.seed = params->seed;
  if (!to_level(params->obscurity, &ep.level))
    return arg_error("bad obscurity value");
  ep.translate.mapper.kappa = params->kappa;
  ep.translate.mapper.lambda = params->lambda;
  ep.translate.k_paths = params->k_paths;
  if (!to_weights(params->weights, &ep.translate.weights))
    return arg_error("bad weights value");
  *out = nullptr;
  return wrap([&] {
    auto handle = std::make_unique<fragmap_report>();
    handle->report = cross_validate(tasks->bench, catalog->catalog, sim->sim, ep);
    handle->text = render_report_text(handle->report);
    handle->json = render_report_json(handle->report);
    *out = handle.release();
  });
}

double fragmap_report_kw_accuracy(const fragmap_report* report) {
  return report ? report->report.kw_accuracy : 0.0;
}

double fragmap_report_fq_accuracy(const fragmap_report* report) {
  return report ? report->report.fq_accuracy : 0.0;
}

uint64_t fragmap_report_failures(const fragmap_report* report) {
  return report ? report->report.failures : 0;
}

const char* fragmap_report_text(const fragmap_report* report) {
  return report ? report->text.c_str() : nullptr;
}

const char* fragmap_report_json(const fragmap_report* report) {
  return report ? report->json.c_str() : nullptr;
}

void fragmap_report_free(fragmap_report* report) { delete report; }

}  // extern "C"
