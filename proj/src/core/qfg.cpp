#include "core/qfg.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace fragmap {

void FragmentGraph::add_query(const std::vector<QueryFragment>& fragments) {
  std::set<QueryFragment> unique;
  for (const QueryFragment& f : fragments) unique.insert(obscure(f, level_));
  for (const QueryFragment& f : unique) ++occurrences_[f];
  for (auto a = unique.begin(); a != unique.end(); ++a)
    for (auto b = std::next(a); b != unique.end(); ++b)
      ++cooccurrences_[FragmentPair::make(*a, *b)];
  ++queries_;
}

uint64_t FragmentGraph::occurrences(const QueryFragment& fragment) const {
  auto it = occurrences_.find(obscure(fragment, level_));
  return it == occurrences_.end() ? 0 : it->second;
}

uint64_t FragmentGraph::cooccurrences(const QueryFragment& a,
                                      const QueryFragment& b) const {
  auto it = cooccurrences_.find(
      FragmentPair::make(obscure(a, level_), obscure(b, level_)));
  return it == cooccurrences_.end() ? 0 : it->second;
}

double FragmentGraph::dice(const QueryFragment& a, const QueryFragment& b) const {
  QueryFragment oa = obscure(a, level_);
  QueryFragment ob = obscure(b, level_);
  uint64_t na = occurrences(oa);
  uint64_t nb = occurrences(ob);
  if (oa == ob) return na > 0 ? 1.0 : 0.0;
  if (na + nb == 0) return 0.0;
  uint64_t ne = cooccurrences(oa, ob);
  return 2.0 * static_cast<double>(ne) / static_cast<double>(na + nb);
}

void FragmentGraph::merge(const FragmentGraph& other) {
  if (other.level_ != level_)
    fail(ErrorCode::ObscurityMismatch,
         std::string("cannot merge graphs at levels ") + obscurity_name(level_) +
             " and " + obscurity_name(other.level_));
  queries_ += other.queries_;
  for (const auto& [frag, n] : other.occurrences_) occurrences_[frag] += n;
  for (const auto& [pair, n] : other.cooccurrences_) cooccurrences_[pair] += n;
}

std::string FragmentGraph::save_text() const {
  // Tab-separated: expressions are single-spaced so tabs never collide.
  std::ostringstream out;
  out << "fragmentgraph 1 " << obscurity_name(level_) << " " << queries_ << "\n";
  for (const auto& [frag, n] : occurrences_)
    out << "f\t" << n << "\t" << context_name(frag.context) << "\t"
        << frag.expression << "\n";
  for (const auto& [pair, n] : cooccurrences_)
    out << "p\t" << n << "\t" << context_name(pair.first.context) << "\t"
        << pair.first.expression << "\t" << context_name(pair.second.context)
        << "\t" << pair.second.expression << "\n";
  return out.str();
}

void FragmentGraph::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << save_text();
  if (!out) fail(ErrorCode::IoError, "error writing '" + path + "'");
}

namespace {

QueryFragment fragment_from_fields(const std::string& context_field,
                                   const std::string& expression,
                                   ObscurityLevel level, const std::string& path) {
  FragmentContext context;
  if (!parse_context(context_field, &context))
    fail(ErrorCode::FormatError,
         path + ": unknown fragment context '" + context_field + "'");
  return {expression, context, level};
}

uint64_t count_from_field(const std::string& field, const std::string& path) {
  auto n = parse_number(field);
  if (!n || *n < 0 || *n != static_cast<uint64_t>(*n))
    fail(ErrorCode::FormatError, path + ": bad count '" + field + "'");
  return static_cast<uint64_t>(*n);
}

}  // namespace

FragmentGraph FragmentGraph::load_text(const std::string& text) {
  const std::string where = "fragment graph";
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header))
    fail(ErrorCode::FormatError, where + ": empty input");
  std::vector<std::string> head = word_tokens(header);
  ObscurityLevel level;
  if (head.size() < 4 || head[0] != "fragmentgraph" || head[1] != "1" ||
      !parse_obscurity(head[2], &level))
    fail(ErrorCode::FormatError, where + ": bad header '" + header + "'");

  FragmentGraph g(level);
  g.queries_ = count_from_field(head[3], where);
  std::string line;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line, '\t');
    std::string at = where + " line " + std::to_string(lineno);
    if (fields[0] == "f" && fields.size() == 4) {
      QueryFragment f = fragment_from_fields(fields[2], fields[3], level, at);
      if (!g.occurrences_.emplace(f, count_from_field(fields[1], at)).second)
        fail(ErrorCode::FormatError, at + ": duplicate fragment");
    } else if (fields[0] == "p" && fields.size() == 6) {
      FragmentPair pair = FragmentPair::make(
          fragment_from_fields(fields[2], fields[3], level, at),
          fragment_from_fields(fields[4], fields[5], level, at));
      if (pair.first == pair.second)
        fail(ErrorCode::FormatError, at + ": self-pair");
      if (!g.cooccurrences_.emplace(pair, count_from_field(fields[1], at)).second)
        fail(ErrorCode::FormatError, at + ": duplicate pair");
    } else {
      fail(ErrorCode::FormatError, at + ": unrecognized line");
    }
  }
  for (const auto& [pair, ne] : g.cooccurrences_) {
    uint64_t na = g.occurrences(pair.first);
    uint64_t nb = g.occurrences(pair.second);
    if (ne > na || ne > nb)
      fail(ErrorCode::FormatError,
           where + ": pair count exceeds fragment counts for '" +
               pair.first.expression + "' / '" + pair.second.expression + "'");
  }
  return g;
}

FragmentGraph FragmentGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_text(buf.str());
}

FragmentGraph build_graph_from_log(const std::string& log_text,
                                   ObscurityLevel level, LogBuildStats* stats) {
  FragmentGraph g(level);
  LogBuildStats local;
  for (const std::string& statement : split_statements(log_text)) {
    try {
      g.add_query(extract_fragments(parse_query(statement)));
      ++local.parsed;
    } catch (const Error& e) {
      ++local.skipped;
      std::string head = statement.substr(0, 60);
      local.skip_reasons.push_back(std::string(error_code_name(e.code())) +
                                   ": " + e.what() + " in: " + head);
    }
  }
  if (stats) *stats = std::move(local);
  return g;
}

FragmentGraph build_graph_from_log_file(const std::string& path,
                                        ObscurityLevel level,
                                        LogBuildStats* stats) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return build_graph_from_log(buf.str(), level, stats);
}

}  // namespace fragmap
