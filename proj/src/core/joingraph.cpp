#include "core/joingraph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "core/errors.hpp"

namespace fragmap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr uint64_t kEnumerationCap = 5000000;

QueryFragment from_fragment(const std::string& relation) {
  return {relation, FragmentContext::From, ObscurityLevel::Full};
}

}  // namespace

const char* weight_mode_name(WeightMode mode) {
  return mode == WeightMode::Default ? "default" : "log";
}

bool parse_weight_mode(const std::string& name, WeightMode* out) {
  if (name == "default") *out = WeightMode::Default;
  else if (name == "log") *out = WeightMode::Log;
  else return false;
  return true;
}

JoinDemand JoinDemand::for_attribute(const SchemaGraph& schema,
                                     const std::string& qualified) {
  const Attribute& attr = schema.attribute(qualified);
  return {attr.relation, attr.qualified()};
}

// --- expanded graph ---------------------------------------------------

ExpandedGraph::ExpandedGraph(const SchemaGraph& schema) {
  for (const auto& [name, rel] : schema.relations()) {
    instances_[name] = 1;
    size_t rv = add_vertex({true, name, "", 1});
    for (const std::string& attr : rel.attributes) {
      size_t av = add_vertex({false, name, attr, 1});
      edges_.push_back({rv, av, false});
    }
  }
  for (const auto& [fk, pk] : schema.fk_edges()) {
    size_t a = lookup_.at(fk);
    size_t b = lookup_.at(pk);
    edges_.push_back({a, b, true});
  }
}

size_t ExpandedGraph::add_vertex(Vertex v) {
  std::string key = RelationInstance{v.relation, v.instance}.label();
  if (!v.is_relation) key += "." + v.attribute;
  size_t id = vertices_.size();
  vertices_.push_back(std::move(v));
  lookup_[key] = id;
  return id;
}

std::vector<size_t> ExpandedGraph::incident(size_t v) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].a == v || edges_[i].b == v) out.push_back(i);
  return out;
}

int ExpandedGraph::instance_count(const std::string& relation) const {
  auto it = instances_.find(relation);
  return it == instances_.end() ? 0 : it->second;
}

bool ExpandedGraph::has_attribute_instance(const std::string& qualified,
                                           int instance) const {
  auto dot = qualified.find('.');
  if (dot == std::string::npos) return false;
  std::string key =
      RelationInstance{qualified.substr(0, dot), instance}.label() +
      qualified.substr(dot);
  return lookup_.count(key) > 0;
}

int ExpandedGraph::fork(const std::string& qualified_attribute) {
  auto it = lookup_.find(qualified_attribute);
  if (it == lookup_.end() || vertices_[it->second].is_relation)
    fail(ErrorCode::UnknownElement,
         "unknown attribute '" + qualified_attribute + "'");
  size_t root = it->second;

  // one fresh copy number per relation touched by this fork
  std::map<std::string, int> fork_instance;
  auto clone_vertex = [&](size_t orig) {
    const Vertex& v = vertices_[orig];
    auto [fit, fresh] = fork_instance.try_emplace(v.relation, 0);
    if (fresh) fit->second = ++instances_[v.relation];
    Vertex c = v;
    c.instance = fit->second;
    return add_vertex(std::move(c));
  };

  std::map<size_t, size_t> clone_of;
  std::set<std::pair<size_t, size_t>> added;
  std::vector<size_t> stack_orig, stack_clone;  // mirrored
  clone_of[root] = clone_vertex(root);
  stack_orig.push_back(root);
  stack_clone.push_back(clone_of[root]);

  size_t original_edges = edges_.size();
  while (!stack_orig.empty()) {
    size_t u = stack_orig.back();
    size_t uc = stack_clone.back();
    stack_orig.pop_back();
    stack_clone.pop_back();
    for (size_t ei = 0; ei < original_edges; ++ei) {
      const Edge e = edges_[ei];
      if (e.a != u && e.b != u) continue;
      if (e.fkpk && e.a == u) {
        // outgoing reference: when the target is part of the cloned region
        // the edge stays internal; otherwise re-attach the clone to the
        // original target and let this branch end
        auto cit = clone_of.find(e.b);
        size_t target = cit == clone_of.end() ? e.b : cit->second;
        if (added.insert({uc, target}).second)
          edges_.push_back({uc, target, true});
        continue;
      }
      size_t other = (e.a == u) ? e.b : e.a;
      auto cit = clone_of.find(other);
      size_t oc;
      if (cit == clone_of.end()) {
        oc = clone_vertex(other);
        clone_of[other] = oc;
        stack_orig.push_back(other);
        stack_clone.push_back(oc);
      } else {
        oc = cit->second;
      }
      size_t ca = (e.a == u) ? uc : oc;
      size_t cb = (e.b == u) ? uc : oc;
      if (added.insert({ca, cb}).second) edges_.push_back({ca, cb, e.fkpk});
    }
  }
  return fork_instance.at(vertices_[root].relation);
}

std::vector<ExpandedGraph::ReferenceEdge> ExpandedGraph::reference_edges()
    const {
  std::vector<ReferenceEdge> out;
  for (const Edge& e : edges_) {
    if (!e.fkpk) continue;
    const Vertex& a = vertices_[e.a];
    const Vertex& b = vertices_[e.b];
    out.push_back({{a.relation, a.instance},
                   a.attribute,
                   {b.relation, b.instance},
                   b.attribute});
  }
  std::sort(out.begin(), out.end(), [](const ReferenceEdge& x,
                                       const ReferenceEdge& y) {
    return std::tie(x.from, x.from_attr, x.to, x.to_attr) <
           std::tie(y.from, y.from_attr, y.to, y.to_attr);
  });
  return out;
}

// --- collapsed join graph ---------------------------------------------

size_t JoinGraph::index_of(const RelationInstance& v) const {
  for (size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == v) return i;
  fail(ErrorCode::UnknownElement, "relation instance '" + v.label() +
                                      "' is not in the join graph");
}

JoinGraph collapse_join_graph(const ExpandedGraph& expanded, WeightMode mode,
                              const FragmentGraph* graph) {
  if (mode == WeightMode::Log && !graph)
    fail(ErrorCode::InvalidArgument,
         "log-driven weights require a fragment graph");
  JoinGraph out;
  std::set<RelationInstance> seen;
  for (const auto& e : expanded.reference_edges()) {
    seen.insert(e.from);
    seen.insert(e.to);
  }
  out.vertices.assign(seen.begin(), seen.end());

  for (const auto& e : expanded.reference_edges()) {
    if (e.from == e.to) continue;  // self reference joins nothing
    JoinGraph::Edge edge;
    edge.a = out.index_of(e.from);
    edge.b = out.index_of(e.to);
    edge.a_attr = e.from_attr;
    edge.b_attr = e.to_attr;
    edge.weight = 1.0;
    if (mode == WeightMode::Log)
      edge.weight = 1.0 - graph->dice(from_fragment(e.from.relation),
                                      from_fragment(e.to.relation));
    edge.label = e.from.label() + "." + e.from_attr + "=" + e.to.label() +
                 "." + e.to_attr;
    out.edges.push_back(std::move(edge));
  }
  std::sort(out.edges.begin(), out.edges.end(),
            [](const JoinGraph::Edge& x, const JoinGraph::Edge& y) {
              return x.label < y.label;
            });
  return out;
}

// --- tree search --------------------------------------------------------

namespace {

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<int> pred_edge;  // edge taken into each vertex; -1 at source
};

ShortestPaths dijkstra(const JoinGraph& g,
                       const std::vector<std::vector<size_t>>& incidence,
                       size_t source) {
  size_t n = g.vertices.size();
  ShortestPaths sp{std::vector<double>(n, kInf), std::vector<int>(n, -1)};
  std::vector<char> done(n, 0);
  sp.dist[source] = 0.0;
  for (size_t round = 0; round < n; ++round) {
    size_t u = n;
    for (size_t v = 0; v < n; ++v)
      if (!done[v] && sp.dist[v] < kInf && (u == n || sp.dist[v] < sp.dist[u]))
        u = v;
    if (u == n) break;
    done[u] = 1;
    for (size_t ei : incidence[u]) {
      const auto& e = g.edges[ei];
      size_t v = (e.a == u) ? e.b : e.a;
      double nd = sp.dist[u] + e.weight;
      if (nd < sp.dist[v]) {
        sp.dist[v] = nd;
        sp.pred_edge[v] = static_cast<int>(ei);
      }
    }
  }
  return sp;
}

std::vector<std::vector<size_t>> build_incidence(const JoinGraph& g) {
  std::vector<std::vector<size_t>> incidence(g.vertices.size());
  for (size_t i = 0; i < g.edges.size(); ++i) {
    incidence[g.edges[i].a].push_back(i);
    incidence[g.edges[i].b].push_back(i);
  }
  return incidence;
}

struct Dsu {
  std::vector<size_t> parent;
  explicit Dsu(size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), size_t{0});
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

JoinPath make_path(const JoinGraph& g, const std::vector<size_t>& edge_ids,
                   const std::vector<size_t>& terminals) {
  JoinPath path;
  std::set<RelationInstance> verts;
  for (size_t t : terminals) verts.insert(g.vertices[t]);
  for (size_t ei : edge_ids) {
    path.edges.push_back(g.edges[ei]);
    verts.insert(g.vertices[g.edges[ei].a]);
    verts.insert(g.vertices[g.edges[ei].b]);
    path.total_weight += g.edges[ei].weight;
  }
  std::sort(path.edges.begin(), path.edges.end(),
            [](const JoinGraph::Edge& x, const JoinGraph::Edge& y) {
              return x.label < y.label;
            });
  path.vertices.assign(verts.begin(), verts.end());
  size_t m = path.edges.size();
  path.cost = m == 0 ? 0.0 : path.total_weight / static_cast<double>(m * m);
  path.likelihood = 1.0 - path.cost;
  return path;
}

std::vector<size_t> normalize_terminals(const JoinGraph& g,
                                        const std::vector<size_t>& terminals) {
  if (terminals.empty())
    fail(ErrorCode::InvalidArgument, "no terminals to connect");
  std::set<size_t> uniq(terminals.begin(), terminals.end());
  for (size_t t : uniq)
    if (t >= g.vertices.size())
      fail(ErrorCode::InvalidArgument, "terminal out of range");
  return {uniq.begin(), uniq.end()};
}

}  // namespace

JoinPath steiner_tree(const JoinGraph& g,
                      const std::vector<size_t>& terminals) {
  std::vector<size_t> terms = normalize_terminals(g, terminals);
  if (terms.size() == 1) return make_path(g, {}, terms);

  auto incidence = build_incidence(g);
  std::vector<ShortestPaths> sp;
  sp.reserve(terms.size());
  for (size_t t : terms) sp.push_back(dijkstra(g, incidence, t));
  for (size_t i = 0; i < terms.size(); ++i)
    for (size_t j = i + 1; j < terms.size(); ++j)
      if (sp[i].dist[terms[j]] == kInf)
        fail(ErrorCode::Disconnected,
             "no join path connects '" + g.vertices[terms[i]].label() +
                 "' and '" + g.vertices[terms[j]].label() + "'");

  // spanning tree of the closure over terminals, grown greedily
  std::vector<char> in_tree(terms.size(), 0);
  in_tree[0] = 1;
  std::set<size_t> union_edges;
  for (size_t added = 1; added < terms.size(); ++added) {
    size_t best_i = terms.size(), best_j = terms.size();
    double best = kInf;
    for (size_t i = 0; i < terms.size(); ++i) {
      if (!in_tree[i]) continue;
      for (size_t j = 0; j < terms.size(); ++j) {
        if (in_tree[j]) continue;
        if (sp[i].dist[terms[j]] < best) {
          best = sp[i].dist[terms[j]];
          best_i = i;
          best_j = j;
        }
      }
    }
    in_tree[best_j] = 1;
    // expand the closure edge into its underlying path
    size_t v = terms[best_j];
    while (v != terms[best_i]) {
      int ei = sp[best_i].pred_edge[v];
      union_edges.insert(static_cast<size_t>(ei));
      const auto& e = g.edges[static_cast<size_t>(ei)];
      v = (e.a == v) ? e.b : e.a;
    }
  }

  // spanning tree of the union subgraph (drops any cycles)
  std::vector<size_t> sorted_union(union_edges.begin(), union_edges.end());
  std::sort(sorted_union.begin(), sorted_union.end(),
            [&g](size_t x, size_t y) {
              if (g.edges[x].weight != g.edges[y].weight)
                return g.edges[x].weight < g.edges[y].weight;
              return g.edges[x].label < g.edges[y].label;
            });
  Dsu dsu(g.vertices.size());
  std::vector<size_t> tree;
  for (size_t ei : sorted_union)
    if (dsu.unite(g.edges[ei].a, g.edges[ei].b)) tree.push_back(ei);

  // peel connectors that dangle below a non-terminal leaf
  std::set<size_t> term_set(terms.begin(), terms.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<size_t, int> degree;
    for (size_t ei : tree) {
      degree[g.edges[ei].a]++;
      degree[g.edges[ei].b]++;
    }
    for (auto it = tree.begin(); it != tree.end(); ++it) {
      const auto& e = g.edges[*it];
      bool a_leaf = degree[e.a] == 1 && !term_set.count(e.a);
      bool b_leaf = degree[e.b] == 1 && !term_set.count(e.b);
      if (a_leaf || b_leaf) {
        tree.erase(it);
        changed = true;
        break;
      }
    }
  }
  return make_path(g, tree, terms);
}

std::vector<JoinPath> k_best_paths(const JoinGraph& g,
                                   const std::vector<size_t>& terminals,
                                   int k) {
  if (k <= 0) fail(ErrorCode::InvalidArgument, "k must be positive");
  std::vector<size_t> terms = normalize_terminals(g, terminals);
  JoinPath base = steiner_tree(g, terms);  // raises when disconnected
  size_t limit = base.edges.size() + 2;

  auto incidence = build_incidence(g);
  std::set<size_t> term_set(terms.begin(), terms.end());
  std::set<std::vector<size_t>> seen;
  std::vector<std::vector<size_t>> found;
  uint64_t ops = 0;

  std::vector<size_t> cur_edges;
  std::vector<char> in_tree(g.vertices.size(), 0);
  in_tree[terms[0]] = 1;

  auto record_if_valid = [&]() {
    for (size_t t : terms)
      if (!in_tree[t]) return;
    std::map<size_t, int> degree;
    for (size_t ei : cur_edges) {
      degree[g.edges[ei].a]++;
      degree[g.edges[ei].b]++;
    }
    for (const auto& [v, d] : degree)
      if (d == 1 && !term_set.count(v)) return;
    found.push_back(cur_edges);
  };

  auto grow = [&](auto&& self) -> void {
    std::vector<size_t> key = cur_edges;
    std::sort(key.begin(), key.end());
    if (!seen.insert(std::move(key)).second) return;
    if (++ops > kEnumerationCap)
      fail(ErrorCode::CombinatorialLimit,
           "join path enumeration exceeds the search budget");
    record_if_valid();
    if (cur_edges.size() >= limit) return;
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
      bool a_in = in_tree[g.edges[ei].a];
      bool b_in = in_tree[g.edges[ei].b];
      if (a_in == b_in) continue;  // keeps the growth acyclic and connected
      size_t fresh = a_in ? g.edges[ei].b : g.edges[ei].a;
      cur_edges.push_back(ei);
      in_tree[fresh] = 1;
      self(self);
      in_tree[fresh] = 0;
      cur_edges.pop_back();
    }
  };
  grow(grow);

  std::vector<JoinPath> paths;
  paths.reserve(found.size());
  bool base_included = false;
  auto labels_of = [](const JoinPath& p) {
    std::vector<std::string> ls;
    for (const auto& e : p.edges) ls.push_back(e.label);
    return ls;
  };
  std::vector<std::string> base_labels = labels_of(base);
  for (const auto& edge_ids : found) {
    paths.push_back(make_path(g, edge_ids, terms));
    if (labels_of(paths.back()) == base_labels) base_included = true;
  }
  if (!base_included) paths.push_back(base);

  std::sort(paths.begin(), paths.end(),
            [&labels_of](const JoinPath& x, const JoinPath& y) {
              if (x.total_weight != y.total_weight)
                return x.total_weight < y.total_weight;
              if (x.edges.size() != y.edges.size())
                return x.edges.size() < y.edges.size();
              return labels_of(x) < labels_of(y);
            });
  if (paths.size() > static_cast<size_t>(k))
    paths.resize(static_cast<size_t>(k));
  return paths;
}

std::vector<std::string> to_relation_bag(
    const SchemaGraph& schema, const std::vector<JoinDemand>& demands) {
  std::vector<std::string> out;
  for (const JoinDemand& d : demands) {
    if (!schema.has_relation(d.relation))
      fail(ErrorCode::UnknownElement, "unknown relation '" + d.relation + "'");
    if (!d.attribute.empty() && !schema.has_attribute(d.attribute))
      fail(ErrorCode::UnknownElement,
           "unknown attribute '" + d.attribute + "'");
    out.push_back(d.relation);
  }
  return out;
}

JoinInference infer_joins(const SchemaGraph& schema, const FragmentGraph* graph,
                          const std::vector<JoinDemand>& demands,
                          WeightMode mode, int k) {
  if (demands.empty())
    fail(ErrorCode::InvalidArgument, "empty demand bag");
  ExpandedGraph expanded(schema);

  JoinInference result;
  std::map<std::string, int> attr_seen;
  for (const JoinDemand& d : demands) {
    if (!schema.has_relation(d.relation))
      fail(ErrorCode::UnknownElement, "unknown relation '" + d.relation + "'");
    if (d.attribute.empty()) {
      result.bindings.push_back({d.relation, 1});
      continue;
    }
    if (!schema.has_attribute(d.attribute))
      fail(ErrorCode::UnknownElement,
           "unknown attribute '" + d.attribute + "'");
    int occurrence = ++attr_seen[d.attribute];
    int instance = occurrence == 1 ? 1 : expanded.fork(d.attribute);
    result.bindings.push_back({d.relation, instance});
  }

  result.graph = collapse_join_graph(expanded, mode, graph);
  const JoinGraph& jg = result.graph;
  std::set<RelationInstance> distinct(result.bindings.begin(),
                                      result.bindings.end());
  if (distinct.size() == 1 &&
      std::find(jg.vertices.begin(), jg.vertices.end(), *distinct.begin()) ==
          jg.vertices.end()) {
    // a relation with no reference edges can only ever stand alone
    result.paths.push_back(JoinPath{{}, {*distinct.begin()}, 0.0, 0.0, 1.0});
    return result;
  }
  std::set<size_t> term_ids;
  for (const RelationInstance& b : distinct) {
    if (std::find(jg.vertices.begin(), jg.vertices.end(), b) ==
        jg.vertices.end())
      fail(ErrorCode::Disconnected,
           "relation '" + b.label() + "' has no join edges");
    term_ids.insert(jg.index_of(b));
  }
  result.paths = k_best_paths(
      jg, std::vector<size_t>(term_ids.begin(), term_ids.end()), k);
  return result;
}

}  // namespace fragmap
