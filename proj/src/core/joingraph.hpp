#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/qfg.hpp"
#include "core/schema.hpp"

namespace fragmap {

enum class WeightMode { Default, Log };

const char* weight_mode_name(WeightMode mode);
bool parse_weight_mode(const std::string& name, WeightMode* out);

// One occupant of the FROM clause: a relation plus a copy number for
// self-joins. Copies beyond the first print as "author#2".
struct RelationInstance {
  std::string relation;
  int instance = 1;

  std::string label() const {
    return instance == 1 ? relation
                         : relation + "#" + std::to_string(instance);
  }
  friend auto operator<=>(const RelationInstance&,
                          const RelationInstance&) = default;
};

// One entry of the demand bag: a bare relation or a qualified attribute.
struct JoinDemand {
  std::string relation;
  std::string attribute;  // qualified; empty for a bare relation

  static JoinDemand for_relation(std::string rel) {
    return {std::move(rel), ""};
  }
  static JoinDemand for_attribute(const SchemaGraph& schema,
                                  const std::string& qualified);
};

// Attribute-level schema graph with relation instances: vertices are
// relations and attributes, membership edges tie attributes to their
// relation, and directed reference edges run FK -> PK. fork() clones the
// connected surroundings of an attribute to make room for one more
// reference to it, stopping each branch at an outgoing FK -> PK edge,
// which is re-attached to the original target.
class ExpandedGraph {
 public:
  explicit ExpandedGraph(const SchemaGraph& schema);

  // Clone around the given attribute; returns the new copy number of the
  // owning relation.
  int fork(const std::string& qualified_attribute);

  size_t vertex_count() const { return vertices_.size(); }
  int instance_count(const std::string& relation) const;
  bool has_attribute_instance(const std::string& qualified,
                              int instance) const;

  struct ReferenceEdge {
    RelationInstance from;  // FK side
    std::string from_attr;  // unqualified
    RelationInstance to;    // PK side
    std::string to_attr;
  };
  // All FK -> PK edges across relation instances, deterministic order.
  std::vector<ReferenceEdge> reference_edges() const;

 private:
  struct Vertex {
    bool is_relation = false;
    std::string relation;
    std::string attribute;  // unqualified; empty for relation vertices
    int instance = 1;
  };
  struct Edge {
    size_t a, b;     // membership: a relation, b attribute
    bool fkpk;       // reference edge a -> b (a FK, b PK) when true
  };

  size_t add_vertex(Vertex v);
  std::vector<size_t> incident(size_t v) const;

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, int> instances_;  // relation -> copies so far
  std::map<std::string, size_t> lookup_;  // label()/qualified -> vertex
};

// Relation-instance view used by the tree search: one vertex per relation
// instance, one undirected edge per FK-PK attribute pair.
struct JoinGraph {
  struct Edge {
    size_t a, b;
    std::string a_attr, b_attr;  // unqualified; a_attr is the FK side
    double weight = 1.0;
    std::string label;  // "writes#2.aid=author#2.aid", determinism anchor
  };
  std::vector<RelationInstance> vertices;
  std::vector<Edge> edges;

  size_t index_of(const RelationInstance& v) const;
};

// Collapse the expanded graph; Log mode weighs each edge 1 - dice of the
// two base relations' FROM fragments in the query log.
JoinGraph collapse_join_graph(const ExpandedGraph& expanded, WeightMode mode,
                              const FragmentGraph* graph);

// A tree of join edges covering some terminal set.
struct JoinPath {
  std::vector<JoinGraph::Edge> edges;          // sorted by label
  std::vector<RelationInstance> vertices;      // sorted; terminals + connectors
  double total_weight = 0.0;
  double cost = 0.0;        // total_weight / |edges|^2; 0 for the no-join path
  double likelihood = 0.0;  // 1 - cost
};

// Steiner-tree approximation (shortest-path closure + spanning tree +
// leaf pruning). Exact for two terminals.
JoinPath steiner_tree(const JoinGraph& g, const std::vector<size_t>& terminals);

// Every tree within two edges of the approximation's size, best first
// (ascending total weight, then edge count, then labels); the
// approximation's own tree is always included.
std::vector<JoinPath> k_best_paths(const JoinGraph& g,
                                   const std::vector<size_t>& terminals,
                                   int k);

struct JoinInference {
  std::vector<RelationInstance> bindings;  // one per demand, same order
  JoinGraph graph;                         // instance graph the paths live in
  std::vector<JoinPath> paths;             // best first
};

// Fork for duplicate attribute references, bind each demand to a relation
// instance, and rank the join paths connecting them.
JoinInference infer_joins(const SchemaGraph& schema, const FragmentGraph* graph,
                          const std::vector<JoinDemand>& demands,
                          WeightMode mode, int k);

// The demands' owning relations, multiplicities preserved, input order.
std::vector<std::string> to_relation_bag(const SchemaGraph& schema,
                                         const std::vector<JoinDemand>& demands);

}  // namespace fragmap
