#pragma once

#include <string>
#include <vector>

#include "core/qfg.hpp"
#include "core/simmodel.hpp"
#include "core/sqlparse.hpp"
#include "core/value_index.hpp"

namespace fragmap {

// Where a keyword's mapped fragment lives. Pair keywords map to a predicate
// plus a companion projection of the matched attribute's partner.
enum class MappingContext { Select, From, Where, Pair };

std::string mapping_context_name(MappingContext ctx);
bool parse_mapping_context(const std::string& name, MappingContext* out);

// One keyword with its metadata.
struct KeywordTask {
  std::string keyword;
  MappingContext context = MappingContext::Where;
  std::string op = "=";                 // Where/Pair predicates
  std::vector<std::string> aggregates;  // Select/Pair, outermost first
  bool group = false;                   // mapped projection joins GROUP BY
};

// One way to map one keyword, with everything the SQL builder needs.
struct CandidateMapping {
  QueryFragment fragment;  // scored fragment, literal form
  double sigma = 0.0;

  std::string relation;   // owning relation (the target itself for From)
  std::string attribute;  // qualified; empty for From
  bool is_predicate = false;
  std::string op;      // predicates only
  LiteralValue value;  // predicates only

  bool has_companion = false;  // Pair: projection of the partner attribute
  std::string companion_attribute;  // qualified
  QueryFragment companion_fragment;
  std::vector<std::string> companion_aggregates;
  bool companion_distinct = false;  // no aggregate given
};

// A keyword with its pruned, sorted candidate list.
struct KeywordMappings {
  KeywordTask task;
  std::vector<CandidateMapping> candidates;
};

// One full assignment of keywords to candidates.
struct Configuration {
  std::vector<size_t> choice;  // index into each keyword's candidate list
  double score_sigma = 0.0;
  double score_qfg = 0.0;
  double score_total = 0.0;
};

struct MappingResult {
  std::vector<KeywordMappings> keywords;
  std::vector<Configuration> configs;  // best first

  const CandidateMapping& chosen(const Configuration& c, size_t kw) const {
    return keywords[kw].candidates[c.choice[kw]];
  }
};

struct MapperParams {
  int kappa = 5;        // candidates kept per keyword
  double lambda = 0.8;  // weight of the similarity score
};

// Generate (unpruned) candidates for one keyword, sorted by score.
std::vector<CandidateMapping> keyword_cands(const Catalog& catalog,
                                            const SimilarityModel& sim,
                                            const KeywordTask& task);

// Drop zero scores; collapse to the exact matches when any score reaches
// 1 - kScoreEpsilon; otherwise keep the top kappa plus ties at the cut.
void score_and_prune(std::vector<CandidateMapping>* cands, int kappa);

// Geometric mean of the candidates' scores.
double score_sigma(const std::vector<const CandidateMapping*>& chosen);

// Geometric mean over co-occurrence strengths of all pairs of predicate and
// projection fragments (relation fragments and companions stay out), with
// the exponent taken over the keyword count. Zero when no pair exists.
double score_qfg(const std::vector<const CandidateMapping*>& chosen,
                 const FragmentGraph* graph);

// Enumerate and score every configuration; best first, deterministic order.
// The candidate-list product is capped at 100000 combinations.
MappingResult map_keywords(const Catalog& catalog, const SimilarityModel& sim,
                           const FragmentGraph* graph,
                           const std::vector<KeywordTask>& tasks,
                           const MapperParams& params);

}  // namespace fragmap
