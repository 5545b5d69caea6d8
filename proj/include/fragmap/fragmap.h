#ifndef FRAGMAP_H
#define FRAGMAP_H

/*
 * C surface of the fragment-graph engine. All handles are opaque; every
 * fallible call returns a fragmap_status and, on failure, leaves a
 * diagnostic in fragmap_last_error() (thread-local). Strings returned by
 * accessors point into the queried handle and stay valid until that handle
 * is freed. Indexed accessors return NULL / 0 on an out-of-range index.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fragmap_status {
  FRAGMAP_OK = 0,
  FRAGMAP_IO_ERROR,
  FRAGMAP_FORMAT_ERROR,
  FRAGMAP_PARSE_ERROR,
  FRAGMAP_UNSUPPORTED_QUERY,
  FRAGMAP_OBSCURITY_MISMATCH,
  FRAGMAP_MISSING_PRIMARY_KEY,
  FRAGMAP_NOT_PLAIN_ATTRIBUTE,
  FRAGMAP_UNKNOWN_ELEMENT,
  FRAGMAP_NO_CANDIDATES,
  FRAGMAP_COMBINATORIAL_LIMIT,
  FRAGMAP_ZERO_SCORE,
  FRAGMAP_DISCONNECTED,
  FRAGMAP_INVALID_ARGUMENT,
  FRAGMAP_INTERNAL
} fragmap_status;

typedef enum fragmap_obscurity {
  FRAGMAP_OBSCURITY_FULL = 0,
  FRAGMAP_OBSCURITY_NOCONST = 1,
  FRAGMAP_OBSCURITY_NOCONSTOP = 2
} fragmap_obscurity;

typedef enum fragmap_weights {
  FRAGMAP_WEIGHTS_DEFAULT = 0,
  FRAGMAP_WEIGHTS_LOG = 1
} fragmap_weights;

/* Tunables shared by translation, join inference and evaluation. */
typedef struct fragmap_params {
  int kappa;              /* candidates kept per keyword */
  double lambda;          /* weight of similarity vs. log evidence */
  int obscurity;          /* fragmap_obscurity */
  int folds;              /* cross-validation folds */
  uint64_t seed;          /* fold shuffle seed */
  int k_paths;            /* join paths ranked per configuration */
  int weights;            /* fragmap_weights */
} fragmap_params;

/* Fill in the default parameter values. */
void fragmap_params_init(fragmap_params* params);

const char* fragmap_version(void);
const char* fragmap_status_name(fragmap_status status);
/* Message of the last failing call on this thread ("" when none). */
const char* fragmap_last_error(void);

/* --- catalog: schema plus the indexed data values ---------------------- */
typedef struct fragmap_catalog fragmap_catalog;
/* data_dir may be NULL for a schema-only catalog. */
fragmap_status fragmap_catalog_open(const char* schema_path,
                                    const char* data_dir,
                                    fragmap_catalog** out);
uint64_t fragmap_catalog_relations(const fragmap_catalog* catalog);
uint64_t fragmap_catalog_values(const fragmap_catalog* catalog);
void fragmap_catalog_free(fragmap_catalog* catalog);

/* --- similarity model --------------------------------------------------- */
typedef struct fragmap_sim fragmap_sim;
/* Lexical fallback model; embeddings can be layered on top. */
fragmap_status fragmap_sim_create(fragmap_sim** out);
fragmap_status fragmap_sim_load_embeddings(fragmap_sim* sim, const char* path);
void fragmap_sim_free(fragmap_sim* sim);

/* --- query fragment graph ----------------------------------------------- */
typedef struct fragmap_qfg fragmap_qfg;
fragmap_status fragmap_qfg_build_from_log(const char* log_path, int obscurity,
                                          fragmap_qfg** out);
fragmap_status fragmap_qfg_load(const char* path, fragmap_qfg** out);
fragmap_status fragmap_qfg_save(const fragmap_qfg* qfg, const char* path);
int fragmap_qfg_obscurity(const fragmap_qfg* qfg);
uint64_t fragmap_qfg_fragments(const fragmap_qfg* qfg);
uint64_t fragmap_qfg_pairs(const fragmap_qfg* qfg);
uint64_t fragmap_qfg_queries(const fragmap_qfg* qfg);
/* Statement counts from the building pass (0 for a loaded graph). */
uint64_t fragmap_qfg_parsed(const fragmap_qfg* qfg);
uint64_t fragmap_qfg_skipped(const fragmap_qfg* qfg);
const char* fragmap_qfg_skip_reason(const fragmap_qfg* qfg, uint64_t index);
void fragmap_qfg_free(fragmap_qfg* qfg);

/* --- task/benchmark records --------------------------------------------- */
typedef struct fragmap_tasks fragmap_tasks;
fragmap_status fragmap_tasks_load(const char* path, fragmap_tasks** out);
const char* fragmap_tasks_name(const fragmap_tasks* tasks);
uint64_t fragmap_tasks_count(const fragmap_tasks* tasks);
const char* fragmap_tasks_nlq(const fragmap_tasks* tasks, uint64_t record);
void fragmap_tasks_free(fragmap_tasks* tasks);

/* --- translation of one task record ------------------------------------- */
typedef struct fragmap_result fragmap_result;
/* qfg may be NULL: mapping runs on similarity alone and join inference
 * requires default weights. */
fragmap_status fragmap_translate(const fragmap_catalog* catalog,
                                 const fragmap_sim* sim,
                                 const fragmap_qfg* qfg,
                                 const fragmap_tasks* tasks, uint64_t record,
                                 const fragmap_params* params,
                                 fragmap_result** out);
uint64_t fragmap_result_count(const fragmap_result* result);
const char* fragmap_result_sql(const fragmap_result* result, uint64_t rank);
double fragmap_result_score(const fragmap_result* result, uint64_t rank);
double fragmap_result_config_score(const fragmap_result* result,
                                   uint64_t rank);
double fragmap_result_likelihood(const fragmap_result* result, uint64_t rank);
/* 1 when the top two results share a score (a tie), else 0. */
int fragmap_result_tied(const fragmap_result* result);
const char* fragmap_result_json(const fragmap_result* result);
void fragmap_result_free(fragmap_result* result);

/* --- join-path inference over a demand bag ------------------------------ */
typedef struct fragmap_paths fragmap_paths;
/* bag_spec: comma-separated relation names or qualified attributes. */
fragmap_status fragmap_infer_joins(const fragmap_catalog* catalog,
                                   const fragmap_qfg* qfg,
                                   const char* bag_spec,
                                   const fragmap_params* params,
                                   fragmap_paths** out);
uint64_t fragmap_paths_count(const fragmap_paths* paths);
/* Relations spanned by the path, e.g. "author, writes, publication". */
const char* fragmap_paths_relations(const fragmap_paths* paths,
                                    uint64_t index);
/* Join conditions, e.g. "writes.aid=author.aid AND writes.pid=..." */
const char* fragmap_paths_joins(const fragmap_paths* paths, uint64_t index);
uint64_t fragmap_paths_edge_count(const fragmap_paths* paths, uint64_t index);
double fragmap_paths_weight(const fragmap_paths* paths, uint64_t index);
double fragmap_paths_likelihood(const fragmap_paths* paths, uint64_t index);
const char* fragmap_paths_json(const fragmap_paths* paths);
void fragmap_paths_free(fragmap_paths* paths);

/* --- cross-validated evaluation ------------------------------------------ */
typedef struct fragmap_report fragmap_report;
fragmap_status fragmap_evaluate(const fragmap_catalog* catalog,
                                const fragmap_sim* sim,
                                const fragmap_tasks* tasks,
                                const fragmap_params* params,
                                fragmap_report** out);
double fragmap_report_kw_accuracy(const fragmap_report* report);
double fragmap_report_fq_accuracy(const fragmap_report* report);
uint64_t fragmap_report_failures(const fragmap_report* report);
const char* fragmap_report_text(const fragmap_report* report);
const char* fragmap_report_json(const fragmap_report* report);
void fragmap_report_free(fragmap_report* report);

#ifdef __cplusplus
}
#endif

#endif /* FRAGMAP_H */
