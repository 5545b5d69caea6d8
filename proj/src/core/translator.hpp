#pragma once

#include <string>
#include <vector>

#include "core/joingraph.hpp"
#include "core/mapper.hpp"

namespace fragmap {

struct TranslateParams {
  MapperParams mapper;  // kappa, lambda
  WeightMode weights = WeightMode::Log;
  int k_paths = 3;
};

// A fully resolved query skeleton: projections, predicates, and groupings
// pinned to relation instances, plus the joins tying the instances together.
struct SqlDraft {
  bool distinct = false;
  std::vector<SelectItem> projections;
  std::vector<RelationInstance> relations;  // FROM order
  std::vector<ParsedPredicate> predicates;
  std::vector<JoinCondition> join_conditions;
  std::vector<ColumnRef> group_by;
};

// The demand bag a configuration puts on the join inference, keyword order:
// one entry per relation or predicate/projection attribute, plus one for a
// companion projection. `primary`/`companion` give each keyword's indices
// into `demands` (companion is -1 when absent).
struct DemandPlan {
  std::vector<JoinDemand> demands;
  std::vector<size_t> primary;
  std::vector<int> companion;
};

DemandPlan config_demands(const MappingResult& mapping,
                          const Configuration& config);

// Assemble the draft for one configuration: projections from SELECT-side
// mappings and companions, predicates from the rest, FROM and joins from
// the join path, instances from the demand bindings.
SqlDraft build_sql(const MappingResult& mapping, const Configuration& config,
                   const DemandPlan& plan, const JoinInference& inference,
                   const JoinPath& path);

// Deterministic SQL text. Aliases take the relation's first letter
// (lengthened on collisions) plus the instance ordinal when a relation
// appears more than once; a one-relation draft renders unqualified.
std::string render_sql(const SqlDraft& draft);

struct Translation {
  std::string sql;
  SqlDraft draft;
  JoinPath path;
  size_t config = 0;       // index into the mapping's configurations
  double score_total = 0.0;
  double likelihood = 0.0;
  double score = 0.0;  // score_total * likelihood
};

struct TranslateOutput {
  MappingResult mapping;
  std::vector<Translation> ranked;  // deduped, best first
  bool tied = false;  // distinct queries share the top combined score
};

// Full pipeline for one task list: map keywords, infer joins per
// configuration (join paths tied for first both render), rank by combined
// score, and drop duplicate SQL texts.
TranslateOutput translate(const Catalog& catalog, const SimilarityModel& sim,
                          const FragmentGraph* graph,
                          const std::vector<KeywordTask>& tasks,
                          const TranslateParams& params);

// Structural equality: same relation counts, and some per-relation
// renumbering of instances makes projections, predicates, undirected join
// conditions, group-by sets, and the DISTINCT flag all agree.
bool sql_equivalent(const std::string& a, const std::string& b);

}  // namespace fragmap
