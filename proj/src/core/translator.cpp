#include "core/translator.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace fragmap {

namespace {

std::pair<std::string, std::string> split_qualified(const std::string& q) {
  size_t dot = q.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == q.size())
    fail(ErrorCode::InvalidArgument, "not a qualified attribute: '" + q + "'");
  return {q.substr(0, dot), q.substr(dot + 1)};
}

}  // namespace

DemandPlan config_demands(const MappingResult& mapping,
                          const Configuration& config) {
  DemandPlan plan;
  for (size_t k = 0; k < mapping.keywords.size(); ++k) {
    const KeywordTask& task = mapping.keywords[k].task;
    const CandidateMapping& cand = mapping.chosen(config, k);
    plan.primary.push_back(plan.demands.size());
    if (task.context == MappingContext::From) {
      plan.demands.push_back(JoinDemand::for_relation(cand.relation));
    } else {
      plan.demands.push_back({cand.relation, cand.attribute});
    }
    if (cand.has_companion) {
      plan.companion.push_back(static_cast<int>(plan.demands.size()));
      auto [rel, attr] = split_qualified(cand.companion_attribute);
      (void)attr;
      plan.demands.push_back({rel, cand.companion_attribute});
    } else {
      plan.companion.push_back(-1);
    }
  }
  return plan;
}

SqlDraft build_sql(const MappingResult& mapping, const Configuration& config,
                   const DemandPlan& plan, const JoinInference& inference,
                   const JoinPath& path) {
  if (plan.primary.size() != mapping.keywords.size() ||
      plan.companion.size() != mapping.keywords.size() ||
      inference.bindings.size() != plan.demands.size())
    fail(ErrorCode::InvalidArgument,
         "demand plan does not match the configuration");
  std::set<RelationInstance> in_path(path.vertices.begin(),
                                     path.vertices.end());
  for (const RelationInstance& b : inference.bindings)
    if (!in_path.count(b))
      fail(ErrorCode::InvalidArgument,
           "join path misses relation '" + b.label() + "'");

  SqlDraft draft;
  draft.relations = path.vertices;

  auto column = [](const std::string& qualified, int instance) {
    auto [rel, attr] = split_qualified(qualified);
    return ColumnRef{rel, attr, instance};
  };

  for (size_t k = 0; k < mapping.keywords.size(); ++k) {
    const KeywordTask& task = mapping.keywords[k].task;
    const CandidateMapping& cand = mapping.chosen(config, k);
    const RelationInstance& bound = inference.bindings[plan.primary[k]];
    switch (task.context) {
      case MappingContext::From:
        break;  // already in the FROM clause via the path
      case MappingContext::Select: {
        SelectItem item;
        item.column = column(cand.attribute, bound.instance);
        item.aggregates = task.aggregates;
        draft.projections.push_back(item);
        if (task.group) draft.group_by.push_back(item.column);
        break;
      }
      case MappingContext::Where:
        draft.predicates.push_back(
            {column(cand.attribute, bound.instance), cand.op, cand.value});
        break;
      case MappingContext::Pair: {
        draft.predicates.push_back(
            {column(cand.attribute, bound.instance), cand.op, cand.value});
        const RelationInstance& cb = inference.bindings[plan.companion[k]];
        SelectItem item;
        item.column = column(cand.companion_attribute, cb.instance);
        item.aggregates = cand.companion_aggregates;
        draft.projections.push_back(item);
        if (cand.companion_distinct) draft.distinct = true;
        if (task.group) draft.group_by.push_back(item.column);
        break;
      }
    }
  }
  if (draft.projections.empty())
    fail(ErrorCode::InvalidArgument, "configuration projects nothing");

  for (const JoinGraph::Edge& e : path.edges) {
    const RelationInstance& va = inference.graph.vertices[e.a];
    const RelationInstance& vb = inference.graph.vertices[e.b];
    draft.join_conditions.push_back({{va.relation, e.a_attr, va.instance},
                                     {vb.relation, e.b_attr, vb.instance}});
  }
  return draft;
}

std::string render_sql(const SqlDraft& draft) {
  if (draft.relations.empty())
    fail(ErrorCode::InvalidArgument, "draft has no relations");
  bool qualify = draft.relations.size() > 1;

  std::map<std::string, int> copies;
  for (const RelationInstance& r : draft.relations) ++copies[r.relation];

  std::map<std::pair<std::string, int>, std::string> alias;
  std::set<std::string> taken;
  for (const RelationInstance& r : draft.relations) {
    std::string suffix =
        copies[r.relation] > 1 ? std::to_string(r.instance) : "";
    size_t len = 1;
    std::string name = r.relation.substr(0, len) + suffix;
    while (taken.count(name) && len < r.relation.size())
      name = r.relation.substr(0, ++len) + suffix;
    while (taken.count(name)) name += "_";
    taken.insert(name);
    alias[{r.relation, r.instance}] = name;
  }

  auto ref = [&](const ColumnRef& c) {
    if (!qualify) return c.attribute;
    auto it = alias.find({c.relation, c.instance});
    if (it == alias.end())
      fail(ErrorCode::InvalidArgument,
           "reference to undeclared relation '" + c.relation + "'");
    return it->second + "." + c.attribute;
  };

  std::string sql = "SELECT ";
  if (draft.distinct) sql += "DISTINCT ";
  for (size_t i = 0; i < draft.projections.size(); ++i) {
    const SelectItem& item = draft.projections[i];
    std::string text = ref(item.column);
    if (item.distinct_arg) text = "DISTINCT " + text;
    for (auto it = item.aggregates.rbegin(); it != item.aggregates.rend();
         ++it)
      text = *it + "(" + text + ")";
    sql += (i ? ", " : "") + text;
  }

  sql += " FROM ";
  for (size_t i = 0; i < draft.relations.size(); ++i) {
    const RelationInstance& r = draft.relations[i];
    sql += (i ? ", " : "") + r.relation;
    if (qualify) sql += " " + alias.at({r.relation, r.instance});
  }

  std::vector<std::string> conjuncts;
  for (const ParsedPredicate& p : draft.predicates)
    conjuncts.push_back(ref(p.column) + " " + p.op + " " + p.value.rendered());
  for (const JoinCondition& j : draft.join_conditions)
    conjuncts.push_back(ref(j.left) + " = " + ref(j.right));
  if (!conjuncts.empty()) sql += " WHERE " + join(conjuncts, " AND ");

  if (!draft.group_by.empty()) {
    sql += " GROUP BY ";
    for (size_t i = 0; i < draft.group_by.size(); ++i)
      sql += (i ? ", " : "") + ref(draft.group_by[i]);
  }
  return sql;
}

TranslateOutput translate(const Catalog& catalog, const SimilarityModel& sim,
                          const FragmentGraph* graph,
                          const std::vector<KeywordTask>& tasks,
                          const TranslateParams& params) {
  if (params.k_paths < 1)
    fail(ErrorCode::InvalidArgument, "k_paths must be positive");
  TranslateOutput out;
  out.mapping = map_keywords(catalog, sim, graph, tasks, params.mapper);

  std::vector<Translation> all;
  for (size_t ci = 0; ci < out.mapping.configs.size(); ++ci) {
    const Configuration& cfg = out.mapping.configs[ci];
    DemandPlan plan = config_demands(out.mapping, cfg);
    JoinInference inference = infer_joins(catalog.schema, graph, plan.demands,
                                          params.weights, params.k_paths);
    for (const JoinPath& path : inference.paths) {
      // paths tied with the best both produce a query
      if (path.total_weight != inference.paths[0].total_weight ||
          path.edges.size() != inference.paths[0].edges.size())
        break;
      Translation t;
      t.draft = build_sql(out.mapping, cfg, plan, inference, path);
      t.sql = render_sql(t.draft);
      t.path = path;
      t.config = ci;
      t.score_total = cfg.score_total;
      t.likelihood = path.likelihood;
      t.score = cfg.score_total * path.likelihood;
      all.push_back(std::move(t));
    }
  }

  std::sort(all.begin(), all.end(),
            [](const Translation& a, const Translation& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.config != b.config) return a.config < b.config;
              return a.sql < b.sql;
            });
  std::set<std::string> seen;
  for (Translation& t : all)
    if (seen.insert(t.sql).second) out.ranked.push_back(std::move(t));
  out.tied =
      out.ranked.size() >= 2 && out.ranked[0].score == out.ranked[1].score;
  return out;
}

namespace {

struct CanonRef {
  std::string relation, attribute;
  int instance;
  friend auto operator<=>(const CanonRef&, const CanonRef&) = default;
};

using CanonProjection = std::tuple<CanonRef, std::vector<std::string>, bool>;
using CanonPredicate = std::tuple<CanonRef, std::string, std::string>;
using CanonJoin = std::pair<CanonRef, CanonRef>;

std::string canon_value(const LiteralValue& v) {
  if (!v.numeric) return "'" + v.lexeme;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v.number);
  return buf;
}

struct CanonQuery {
  bool distinct;
  std::multiset<CanonProjection> projections;
  std::set<CanonPredicate> predicates;
  std::set<CanonJoin> joins;
  std::set<CanonRef> group_by;

  friend bool operator==(const CanonQuery&, const CanonQuery&) = default;
};

// `renumber` maps (relation, parsed instance) to a canonical instance; the
// identity when empty.
CanonQuery canonicalize(const ParsedQuery& q,
                        const std::map<std::pair<std::string, int>, int>& renumber) {
  auto ref = [&renumber](const ColumnRef& c) {
    auto it = renumber.find({c.relation, c.instance});
    return CanonRef{c.relation, c.attribute,
                    it == renumber.end() ? c.instance : it->second};
  };
  CanonQuery canon;
  canon.distinct = q.distinct;
  for (const SelectItem& item : q.projections)
    canon.projections.insert(
        {ref(item.column), item.aggregates, item.distinct_arg});
  for (const ParsedPredicate& p : q.predicates)
    canon.predicates.insert({ref(p.column), p.op, canon_value(p.value)});
  for (const JoinCondition& j : q.join_conditions) {
    CanonRef l = ref(j.left), r = ref(j.right);
    if (r < l) std::swap(l, r);
    canon.joins.insert({l, r});
  }
  for (const ColumnRef& g : q.group_by) canon.group_by.insert(ref(g));
  return canon;
}

// Try every per-relation renumbering of `b` against `a` canonicalized once.
bool match_under_renumbering(
    const CanonQuery& target, const ParsedQuery& b,
    std::vector<std::pair<std::string, int>>::const_iterator rel,
    std::vector<std::pair<std::string, int>>::const_iterator end,
    std::map<std::pair<std::string, int>, int>* renumber) {
  if (rel == end) return canonicalize(b, *renumber) == target;
  const auto& [relation, count] = *rel;
  std::vector<int> perm(count);
  for (int i = 0; i < count; ++i) perm[i] = i + 1;
  do {
    for (int i = 0; i < count; ++i) (*renumber)[{relation, i + 1}] = perm[i];
    if (match_under_renumbering(target, b, rel + 1, end, renumber))
      return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

bool sql_equivalent(const std::string& a, const std::string& b) {
  ParsedQuery qa = parse_query(a);
  ParsedQuery qb = parse_query(b);
  if (qa.distinct != qb.distinct) return false;

  std::map<std::string, int> count_a, count_b;
  for (const FromRelation& r : qa.relations) ++count_a[r.relation];
  for (const FromRelation& r : qb.relations) ++count_b[r.relation];
  if (count_a != count_b) return false;

  CanonQuery target = canonicalize(qa, {});
  std::vector<std::pair<std::string, int>> multi;
  for (const auto& [relation, count] : count_b)
    if (count > 1) multi.push_back({relation, count});
  std::map<std::pair<std::string, int>, int> renumber;
  return match_under_renumbering(target, qb, multi.begin(), multi.end(),
                                 &renumber);
}

}  // namespace fragmap
