#include "core/simmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/porter.hpp"
#include "core/text.hpp"

namespace fragmap {

SimilarityModel SimilarityModel::load_embeddings_text(const std::string& text) {
  SimilarityModel m;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || starts_with(t, "#")) continue;
    std::vector<std::string> fields = split_ws(t);
    if (fields.size() < 2)
      fail(ErrorCode::FormatError,
           "embeddings line " + std::to_string(lineno) + ": token plus vector required");
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (size_t i = 1; i < fields.size(); ++i) {
      try {
        vec.push_back(std::stod(fields[i]));
      } catch (...) {
        fail(ErrorCode::FormatError, "embeddings line " + std::to_string(lineno) +
                                         ": bad component '" + fields[i] + "'");
      }
    }
    if (m.dimensions_ == 0) m.dimensions_ = vec.size();
    if (vec.size() != m.dimensions_)
      fail(ErrorCode::FormatError,
           "embeddings line " + std::to_string(lineno) + ": expected " +
               std::to_string(m.dimensions_) + " components, found " +
               std::to_string(vec.size()));
    m.vectors_[to_lower(fields[0])] = std::move(vec);  // last duplicate wins
  }
  if (m.vectors_.empty())
    fail(ErrorCode::FormatError, "embeddings file holds no vectors");
  return m;
}

SimilarityModel SimilarityModel::load_embeddings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_embeddings_text(buf.str());
}

namespace {

std::set<std::string> padded_trigrams(const std::string& stem) {
  std::string padded = "^" + stem + "$";
  std::set<std::string> out;
  for (size_t i = 0; i + 3 <= padded.size(); ++i) out.insert(padded.substr(i, 3));
  return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double SimilarityModel::lexical_pair(const std::string& a, const std::string& b) const {
  std::string sa = porter_stem(to_lower(a));
  std::string sb = porter_stem(to_lower(b));
  if (sa == sb) return 1.0;
  std::set<std::string> ta = padded_trigrams(sa);
  std::set<std::string> tb = padded_trigrams(sb);
  if (ta.empty() || tb.empty()) return 0.0;
  size_t common = 0;
  for (const std::string& t : ta) common += tb.count(t);
  size_t total = ta.size() + tb.size() - common;
  return total == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(total);
}

double SimilarityModel::token_similarity(const std::string& keyword_token,
                                         const std::string& candidate_token) const {
  std::string k = to_lower(keyword_token);
  std::string c = to_lower(candidate_token);
  if (has_embeddings()) {
    auto ik = vectors_.find(k);
    auto ic = vectors_.find(c);
    if (ik != vectors_.end() && ic != vectors_.end())
      return (cosine(ik->second, ic->second) + 1.0) / 2.0;
  }
  return lexical_pair(k, c);
}

double SimilarityModel::sim_text(
    const std::vector<std::string>& keyword_tokens,
    const std::vector<std::string>& candidate_tokens) const {
  if (keyword_tokens.empty() || candidate_tokens.empty())
    fail(ErrorCode::InvalidArgument, "sim_text requires non-empty token lists");
  double sum = 0.0;
  for (const std::string& k : keyword_tokens) {
    double best = 0.0;
    for (const std::string& c : candidate_tokens)
      best = std::max(best, token_similarity(k, c));
    sum += best;
  }
  return sum / static_cast<double>(keyword_tokens.size());
}

double SimilarityModel::sim_num(const std::vector<std::string>& keyword_text_tokens,
                                const std::string& attribute_name,
                                bool match_nonempty) const {
  if (!match_nonempty) return kScoreEpsilon;
  if (keyword_text_tokens.empty()) return 1.0;  // bare number, data agrees
  std::vector<std::string> name_tokens = word_tokens(attribute_name);
  if (name_tokens.empty()) return kScoreEpsilon;
  return sim_text(keyword_text_tokens, name_tokens);
}

}  // namespace fragmap
