#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "core/errors.hpp"
#include "core/porter.hpp"
#include "core/simmodel.hpp"

using namespace fragmap;

namespace {

// Reference trigram Jaccard over "^stem$"-padded stems.
double ref_lexical(const std::string& wa, const std::string& wb) {
  std::string a = "^" + porter_stem(wa) + "$";
  std::string b = "^" + porter_stem(wb) + "$";
  if (a == b) return 1.0;
  auto grams = [](const std::string& s) {
    std::set<std::string> out;
    if (s.size() < 3) return out;
    for (size_t i = 0; i + 3 <= s.size(); ++i) out.insert(s.substr(i, 3));
    return out;
  };
  auto ga = grams(a), gb = grams(b);
  if (ga.empty() || gb.empty()) return 0.0;
  size_t inter = 0;
  for (const auto& g : ga) inter += gb.count(g);
  return static_cast<double>(inter) / (ga.size() + gb.size() - inter);
}

}  // namespace

TEST_CASE("lexical similarity is trigram overlap on stems") {
  SimilarityModel m;
  CHECK(m.token_similarity("databases", "database") == doctest::Approx(1.0));
  CHECK(m.token_similarity("running", "runs") == doctest::Approx(1.0));
  CHECK(m.token_similarity("organize", "organs") ==
        doctest::Approx(ref_lexical("organize", "organs")));
  CHECK(m.token_similarity("journal", "journals") == doctest::Approx(1.0));
  CHECK(m.token_similarity("cat", "dog") == doctest::Approx(0.0));
  for (const char* a : {"paper", "publication", "author", "university"})
    for (const char* b : {"papers", "publish", "authority", "universe"})
      CHECK(m.token_similarity(a, b) == doctest::Approx(ref_lexical(a, b)));
}

TEST_CASE("similarity is symmetric and bounded") {
  SimilarityModel m;
  const char* words[] = {"paper", "papers", "journal", "x", "2000", "query"};
  for (const char* a : words)
    for (const char* b : words) {
      double s = m.token_similarity(a, b);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
      CHECK(s == doctest::Approx(m.token_similarity(b, a)));
    }
}

TEST_CASE("embeddings load and score by shifted cosine") {
  auto m = SimilarityModel::load_embeddings_text(
      "# comment line\n"
      "alpha 1 0\n"
      "beta 0 1\n"
      "gamma -1 0\n"
      "delta 1 0\n");
  CHECK(m.vocabulary_size() == 4);
  CHECK(m.dimensions() == 2);
  CHECK(m.token_similarity("alpha", "delta") == doctest::Approx(1.0));
  CHECK(m.token_similarity("alpha", "beta") == doctest::Approx(0.5));
  CHECK(m.token_similarity("alpha", "gamma") == doctest::Approx(0.0));
}

TEST_CASE("out-of-vocabulary pairs fall back to the lexical measure") {
  auto m = SimilarityModel::load_embeddings_text("alpha 1 0\nbeta 0 1\n");
  SimilarityModel lex;
  // one side in vocabulary, one out: lexical
  CHECK(m.token_similarity("alpha", "alphas") ==
        doctest::Approx(lex.token_similarity("alpha", "alphas")));
  // both out: lexical
  CHECK(m.token_similarity("databases", "database") == doctest::Approx(1.0));
}

TEST_CASE("malformed embedding files are rejected") {
  CHECK_THROWS_AS(SimilarityModel::load_embeddings_text(""), Error);
  CHECK_THROWS_AS(SimilarityModel::load_embeddings_text("# only comments\n"),
                  Error);
  CHECK_THROWS_AS(
      SimilarityModel::load_embeddings_text("alpha 1 0\nbeta 1\n"), Error);
  CHECK_THROWS_AS(SimilarityModel::load_embeddings_text("alpha 1 x\n"), Error);
  CHECK_THROWS_AS(SimilarityModel::load_embeddings_text("alpha\n"), Error);
}

TEST_CASE("multi-token score is the mean of per-token best matches") {
  SimilarityModel m;
  // identical lists score as exact
  CHECK(m.sim_text({"vldb", "journal"}, {"vldb", "journal"}) >=
        1.0 - kScoreEpsilon);
  // each keyword token takes its best candidate token
  double s = m.sim_text({"vldb", "journals"}, {"vldb", "journal"});
  CHECK(s == doctest::Approx(1.0));
  double partial = m.sim_text({"vldb", "unrelated"}, {"vldb", "journal"});
  CHECK(partial == doctest::Approx(0.5));
  CHECK_THROWS_AS(m.sim_text({}, {"a"}), Error);
  CHECK_THROWS_AS(m.sim_text({"a"}, {}), Error);
}

TEST_CASE("numeric predicate scoring") {
  SimilarityModel m;
  // no data match: floor score regardless of tokens
  CHECK(m.sim_num({"papers"}, "year", false) == doctest::Approx(kScoreEpsilon));
  CHECK(m.sim_num({}, "year", false) == doctest::Approx(kScoreEpsilon));
  // bare number (no text tokens) with a data match: certain
  CHECK(m.sim_num({}, "year", true) == doctest::Approx(1.0));
  // otherwise text similarity against the attribute name's words
  CHECK(m.sim_num({"year"}, "year", true) == doctest::Approx(1.0));
  double s = m.sim_num({"cited"}, "citation_count", true);
  CHECK(s == doctest::Approx(m.sim_text({"cited"}, {"citation", "count"})));
}
