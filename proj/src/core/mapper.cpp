#include "core/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace fragmap {

namespace {

const std::set<std::string> kStopwords = {"a", "an", "the", "of"};

// Keyword tokens with stopwords removed; the full set when that would
// leave nothing.
std::vector<std::string> content_tokens(const std::string& keyword) {
  std::vector<std::string> all = word_tokens(keyword);
  if (all.empty())
    fail(ErrorCode::InvalidArgument, "keyword has no words: '" + keyword + "'");
  std::vector<std::string> kept;
  for (const auto& t : all)
    if (!kStopwords.count(t)) kept.push_back(t);
  return kept.empty() ? all : kept;
}

std::vector<std::string> relation_attr_tokens(const Attribute& attr) {
  std::vector<std::string> tokens = word_tokens(attr.relation);
  for (auto& t : word_tokens(attr.name)) tokens.push_back(std::move(t));
  return tokens;
}

void attach_companion(const Catalog& catalog, const KeywordTask& task,
                      CandidateMapping* cand) {
  const Attribute& partner =
      catalog.schema.paired_attribute(cand->attribute);
  cand->has_companion = true;
  cand->companion_attribute = partner.qualified();
  cand->companion_fragment = {partner.qualified(), FragmentContext::Select,
                              ObscurityLevel::Full};
  cand->companion_aggregates = task.aggregates;
  cand->companion_distinct = task.aggregates.empty();
}

// Predicate candidates for a keyword containing a number: one per numeric
// attribute whose data satisfies "attr op number".
std::vector<CandidateMapping> numeric_cands(const Catalog& catalog,
                                            const SimilarityModel& sim,
                                            const KeywordTask& task,
                                            const std::string& number_lexeme) {
  double number = parse_number(number_lexeme).value();
  std::vector<std::string> text_tokens;
  for (const auto& t : content_tokens(task.keyword))
    if (t != to_lower(number_lexeme)) text_tokens.push_back(t);

  std::vector<CandidateMapping> out;
  for (const std::string& attr_name :
       catalog.index.find_numeric_attrs(number, task.op)) {
    const Attribute& attr = catalog.schema.attribute(attr_name);
    CandidateMapping cand;
    cand.relation = attr.relation;
    cand.attribute = attr_name;
    cand.is_predicate = true;
    cand.op = task.op;
    cand.value = {true, number_lexeme, number};
    ParsedPredicate pred{{attr.relation, attr.name, 1}, cand.op, cand.value};
    cand.fragment = {pred.expression(), FragmentContext::Where,
                     ObscurityLevel::Full};
    cand.sigma = sim.sim_num(text_tokens, attr.name, true);
    out.push_back(std::move(cand));
  }
  return out;
}

// Predicate candidates from values in the data: one per (attribute, value)
// containing every keyword token.
std::vector<CandidateMapping> text_cands(const Catalog& catalog,
                                         const SimilarityModel& sim,
                                         const KeywordTask& task) {
  std::vector<std::string> tokens = content_tokens(task.keyword);
  std::vector<CandidateMapping> out;
  for (const auto& match : catalog.index.find_text_attrs(tokens)) {
    const Attribute& attr = catalog.schema.attribute(match.attribute);
    CandidateMapping cand;
    cand.relation = attr.relation;
    cand.attribute = match.attribute;
    cand.is_predicate = true;
    cand.op = task.op;
    cand.value = {false, match.value, 0.0};
    ParsedPredicate pred{{attr.relation, attr.name, 1}, cand.op, cand.value};
    cand.fragment = {pred.expression(), FragmentContext::Where,
                     ObscurityLevel::Full};
    cand.sigma = sim.sim_text(tokens, word_tokens(match.value));
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<CandidateMapping> predicate_cands(const Catalog& catalog,
                                              const SimilarityModel& sim,
                                              const KeywordTask& task) {
  if (auto number = first_number_lexeme(task.keyword)) {
    auto cands = numeric_cands(catalog, sim, task, *number);
    if (!cands.empty()) return cands;
    // no numeric attribute fits; the number may be part of a name
  }
  return text_cands(catalog, sim, task);
}

bool candidate_order(const CandidateMapping& a, const CandidateMapping& b) {
  if (a.sigma != b.sigma) return a.sigma > b.sigma;
  return a.fragment.expression < b.fragment.expression;
}

}  // namespace

std::string mapping_context_name(MappingContext ctx) {
  switch (ctx) {
    case MappingContext::Select: return "select";
    case MappingContext::From: return "from";
    case MappingContext::Where: return "where";
    case MappingContext::Pair: return "pair";
  }
  fail(ErrorCode::Internal, "bad mapping context");
}

bool parse_mapping_context(const std::string& name, MappingContext* out) {
  std::string n = to_lower(name);
  if (n == "select") *out = MappingContext::Select;
  else if (n == "from") *out = MappingContext::From;
  else if (n == "where") *out = MappingContext::Where;
  else if (n == "pair") *out = MappingContext::Pair;
  else return false;
  return true;
}

std::vector<CandidateMapping> keyword_cands(const Catalog& catalog,
                                            const SimilarityModel& sim,
                                            const KeywordTask& task) {
  std::vector<std::string> tokens = content_tokens(task.keyword);
  std::vector<CandidateMapping> out;
  switch (task.context) {
    case MappingContext::From:
      for (const auto& [name, rel] : catalog.schema.relations()) {
        CandidateMapping cand;
        cand.relation = name;
        cand.fragment = {name, FragmentContext::From, ObscurityLevel::Full};
        cand.sigma = sim.sim_text(tokens, word_tokens(name));
        out.push_back(std::move(cand));
      }
      break;
    case MappingContext::Select:
      for (const auto& [qualified, attr] : catalog.schema.attributes()) {
        if (attr.role != AttributeRole::Plain) continue;  // keys carry no meaning
        CandidateMapping cand;
        cand.relation = attr.relation;
        cand.attribute = qualified;
        cand.fragment = {qualified, FragmentContext::Select,
                         ObscurityLevel::Full};
        cand.sigma = sim.sim_text(tokens, relation_attr_tokens(attr));
        out.push_back(std::move(cand));
      }
      break;
    case MappingContext::Where:
      out = predicate_cands(catalog, sim, task);
      break;
    case MappingContext::Pair:
      out = predicate_cands(catalog, sim, task);
      for (auto& cand : out) attach_companion(catalog, task, &cand);
      break;
  }
  std::sort(out.begin(), out.end(), candidate_order);
  return out;
}

void score_and_prune(std::vector<CandidateMapping>* cands, int kappa) {
  if (kappa <= 0) fail(ErrorCode::InvalidArgument, "kappa must be positive");
  std::sort(cands->begin(), cands->end(), candidate_order);
  cands->erase(std::remove_if(cands->begin(), cands->end(),
                              [](const CandidateMapping& c) {
                                return c.sigma <= 0.0;
                              }),
               cands->end());
  if (cands->empty()) return;
  if (cands->front().sigma >= 1.0 - kScoreEpsilon) {
    // an exact match silences everything below the exactness bar
    cands->erase(std::find_if(cands->begin(), cands->end(),
                              [](const CandidateMapping& c) {
                                return c.sigma < 1.0 - kScoreEpsilon;
                              }),
                 cands->end());
    return;
  }
  size_t cut = static_cast<size_t>(kappa);
  if (cands->size() <= cut) return;
  double bar = (*cands)[cut - 1].sigma;
  while (cut < cands->size() && (*cands)[cut].sigma == bar) ++cut;
  cands->resize(cut);
}

double score_sigma(const std::vector<const CandidateMapping*>& chosen) {
  if (chosen.empty()) fail(ErrorCode::InvalidArgument, "empty configuration");
  double log_sum = 0.0;
  for (const CandidateMapping* c : chosen) {
    if (c->sigma <= 0.0) return 0.0;
    log_sum += std::log(c->sigma);
  }
  return std::exp(log_sum / static_cast<double>(chosen.size()));
}

double score_qfg(const std::vector<const CandidateMapping*>& chosen,
                 const FragmentGraph* graph) {
  if (chosen.empty()) fail(ErrorCode::InvalidArgument, "empty configuration");
  if (!graph) return 0.0;
  std::vector<const QueryFragment*> scored;
  for (const CandidateMapping* c : chosen)
    if (c->fragment.context != FragmentContext::From)
      scored.push_back(&c->fragment);
  if (scored.size() < 2) return 0.0;
  double log_sum = 0.0;
  for (size_t i = 0; i < scored.size(); ++i)
    for (size_t j = i + 1; j < scored.size(); ++j) {
      double d = graph->dice(*scored[i], *scored[j]);
      if (d <= 0.0) return 0.0;
      log_sum += std::log(d);
    }
  return std::exp(log_sum / static_cast<double>(chosen.size()));
}

MappingResult map_keywords(const Catalog& catalog, const SimilarityModel& sim,
                           const FragmentGraph* graph,
                           const std::vector<KeywordTask>& tasks,
                           const MapperParams& params) {
  if (tasks.empty()) fail(ErrorCode::InvalidArgument, "no keywords given");
  if (params.lambda < 0.0 || params.lambda > 1.0)
    fail(ErrorCode::InvalidArgument, "lambda must lie in [0, 1]");

  MappingResult result;
  size_t combinations = 1;
  for (const KeywordTask& task : tasks) {
    KeywordMappings km;
    km.task = task;
    km.candidates = keyword_cands(catalog, sim, task);
    score_and_prune(&km.candidates, params.kappa);
    if (km.candidates.empty())
      fail(ErrorCode::NoCandidates,
           "no candidate mapping for keyword '" + task.keyword + "'");
    if (combinations > 100000 / km.candidates.size())
      fail(ErrorCode::CombinatorialLimit,
           "configuration space exceeds 100000 combinations");
    combinations *= km.candidates.size();
    result.keywords.push_back(std::move(km));
  }

  std::vector<size_t> choice(tasks.size(), 0);
  std::vector<const CandidateMapping*> chosen(tasks.size());
  for (size_t n = 0; n < combinations; ++n) {
    size_t rem = n;
    for (size_t k = 0; k < tasks.size(); ++k) {
      size_t width = result.keywords[k].candidates.size();
      choice[k] = rem % width;
      rem /= width;
      chosen[k] = &result.keywords[k].candidates[choice[k]];
    }
    Configuration config;
    config.choice = choice;
    config.score_sigma = score_sigma(chosen);
    config.score_qfg = score_qfg(chosen, graph);
    config.score_total = params.lambda * config.score_sigma +
                         (1.0 - params.lambda) * config.score_qfg;
    result.configs.push_back(std::move(config));
  }

  std::sort(result.configs.begin(), result.configs.end(),
            [&result](const Configuration& a, const Configuration& b) {
              if (a.score_total != b.score_total)
                return a.score_total > b.score_total;
              for (size_t k = 0; k < a.choice.size(); ++k) {
                const QueryFragment& fa =
                    result.keywords[k].candidates[a.choice[k]].fragment;
                const QueryFragment& fb =
                    result.keywords[k].candidates[b.choice[k]].fragment;
                if (fa != fb) return fa < fb;
              }
              return false;
            });
  return result;
}

}  // namespace fragmap
