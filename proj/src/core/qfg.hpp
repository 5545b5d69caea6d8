#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/fragment.hpp"
#include "core/sqlparse.hpp"

namespace fragmap {

// Unordered pair of fragments; `first <= second` always holds.
struct FragmentPair {
  QueryFragment first;
  QueryFragment second;

  static FragmentPair make(const QueryFragment& a, const QueryFragment& b) {
    return (b < a) ? FragmentPair{b, a} : FragmentPair{a, b};
  }
  friend std::strong_ordering operator<=>(const FragmentPair&,
                                          const FragmentPair&) = default;
};

// Co-occurrence statistics over a query log, counted with set semantics per
// query: a fragment contributes one occurrence per query it appears in, a
// pair one co-occurrence per query containing both. Self-pairs are never
// stored; dice() handles them by convention.
class FragmentGraph {
 public:
  explicit FragmentGraph(ObscurityLevel level = ObscurityLevel::NoConstOp)
      : level_(level) {}

  ObscurityLevel level() const { return level_; }

  // Fold one parsed query's fragments in (obscured to the graph's level).
  void add_query(const std::vector<QueryFragment>& fragments);

  uint64_t occurrences(const QueryFragment& fragment) const;
  uint64_t cooccurrences(const QueryFragment& a, const QueryFragment& b) const;

  // 2*n_e / (n_v(a) + n_v(b)); 1.0 for a seen fragment paired with itself,
  // 0.0 whenever the denominator is zero. Inputs are obscured to the graph's
  // level before lookup.
  double dice(const QueryFragment& a, const QueryFragment& b) const;

  size_t fragment_count() const { return occurrences_.size(); }
  size_t pair_count() const { return cooccurrences_.size(); }
  uint64_t query_count() const { return queries_; }

  // Pointwise sum of counts; both graphs must share one obscurity level.
  void merge(const FragmentGraph& other);

  const std::map<QueryFragment, uint64_t>& occurrence_map() const {
    return occurrences_;
  }
  const std::map<FragmentPair, uint64_t>& cooccurrence_map() const {
    return cooccurrences_;
  }

  // Line-oriented text format, deterministically sorted.
  std::string save_text() const;
  void save_file(const std::string& path) const;
  static FragmentGraph load_text(const std::string& text);
  static FragmentGraph load_file(const std::string& path);

 private:
  ObscurityLevel level_;
  uint64_t queries_ = 0;
  std::map<QueryFragment, uint64_t> occurrences_;
  std::map<FragmentPair, uint64_t> cooccurrences_;
};

struct LogBuildStats {
  uint64_t parsed = 0;
  uint64_t skipped = 0;
  std::vector<std::string> skip_reasons;  // one line per skipped statement
};

// Parse every statement in a log and build the graph, skipping (and
// recording) statements the parser rejects.
FragmentGraph build_graph_from_log(const std::string& log_text,
                                   ObscurityLevel level, LogBuildStats* stats);
FragmentGraph build_graph_from_log_file(const std::string& path,
                                        ObscurityLevel level,
                                        LogBuildStats* stats);

}  // namespace fragmap
