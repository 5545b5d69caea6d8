#pragma once

#include <map>
#include <string>
#include <vector>

namespace fragmap {

// Scores below this are treated as zero signal; matches scoring at or above
// 1 - kScoreEpsilon count as exact.
inline constexpr double kScoreEpsilon = 0.001;

// Token-level similarity with two backends:
//  - embedding: cosine over loaded word vectors, mapped to [0,1] by
//    (cos+1)/2; pairs with an out-of-vocabulary side fall back to the
//    lexical measure.
//  - lexical: character-trigram Jaccard over Porter stems.
// Multi-token scores aggregate as the mean over keyword tokens of the best
// match among candidate tokens.
class SimilarityModel {
 public:
  // Pure lexical model (no vectors).
  SimilarityModel() = default;

  static SimilarityModel load_embeddings_text(const std::string& text);
  static SimilarityModel load_embeddings_file(const std::string& path);

  bool has_embeddings() const { return !vectors_.empty(); }
  size_t vocabulary_size() const { return vectors_.size(); }
  size_t dimensions() const { return dimensions_; }

  // Similarity of one token pair in [0,1].
  double token_similarity(const std::string& keyword_token,
                          const std::string& candidate_token) const;

  // Mean over keyword tokens of the max over candidate tokens. Both lists
  // must be non-empty.
  double sim_text(const std::vector<std::string>& keyword_tokens,
                  const std::vector<std::string>& candidate_tokens) const;

  // Score for a numeric predicate candidate: kScoreEpsilon when the predicate
  // matches no data, 1.0 for a bare number with a non-empty match, otherwise
  // the text similarity of the remaining keyword tokens against the
  // attribute name tokens.
  double sim_num(const std::vector<std::string>& keyword_text_tokens,
                 const std::string& attribute_name, bool match_nonempty) const;

 private:
  double lexical_pair(const std::string& a, const std::string& b) const;

  size_t dimensions_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

}  // namespace fragmap
