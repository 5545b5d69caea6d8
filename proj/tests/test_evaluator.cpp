#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <string>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/evaluator.hpp"
#include "core/qfg.hpp"

using namespace fragmap;

namespace {

// Two unjoinable relations: book queries translate standalone, while a
// keyword pair spanning book and shop has no join path.
const char* kSchema = R"(relation book
  bid numeric pk
  title text
  subtitle text
  year numeric
relation shop
  sid numeric pk
  name text
)";

Catalog fixture_catalog() {
  Catalog cat;
  cat.schema = SchemaGraph::load_text(kSchema);
  auto add = [&cat](const char* attr, const char* value) {
    cat.index.add_value(cat.schema.attribute(attr), value);
  };
  add("book.bid", "1");
  add("book.title", "Alpha Codex");
  add("book.subtitle", "Alphabet One");
  add("book.year", "1990");
  add("book.bid", "2");
  add("book.title", "Beta Manual");
  add("book.subtitle", "Volume Two");
  add("book.year", "2001");
  add("shop.sid", "1");
  add("shop.name", "Corner Store");
  return cat;
}

// Hand-scored five-record set: records 1-2 translate perfectly, record 3
// keeps the right mapping but a poorer query, record 4 deliberately carries a
// wrong gold mapping, record 5 spans the two unjoinable relations.
Benchmark toy_benchmark() {
  return load_benchmark_text(R"({
    "name": "toy",
    "records": [
      {
        "nlq": "titles from 1990",
        "keywords": [{"keyword": "title", "context": "select"},
                     {"keyword": "1990"}],
        "gold_sql": "SELECT title FROM book WHERE year = 1990;",
        "gold_map": ["book.title", "book.year = 1990"]
      },
      {
        "keywords": [{"keyword": "title", "context": "select"},
                     {"keyword": "2001"}],
        "gold_sql": "SELECT title FROM book WHERE year = 2001;",
        "gold_map": ["book.title", "book.year = 2001"]
      },
      {
        "keywords": [{"keyword": "title", "context": "select"}],
        "gold_sql": "SELECT title FROM book WHERE year = 1990;",
        "gold_map": ["book.title"]
      },
      {
        "keywords": [{"keyword": "title", "context": "select"}],
        "gold_sql": "SELECT title FROM book;",
        "gold_map": ["book.subtitle"]
      },
      {
        "keywords": [{"keyword": "corner"}, {"keyword": "alpha"}],
        "gold_sql": "SELECT name FROM shop WHERE name = 'Corner Store';",
        "gold_map": ["shop.name = 'Corner Store'",
                     "book.title = 'Alpha Codex'"]
      }
    ]
  })");
}

const RecordOutcome& outcome_for(const EvalReport& report, size_t record) {
  for (const TrialResult& trial : report.trials)
    for (const RecordOutcome& o : trial.outcomes)
      if (o.record == record) return o;
  REQUIRE(false);
  static RecordOutcome none;
  return none;
}

ErrorCode thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

std::string thrown_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("cross validation scores the toy benchmark as hand-computed") {
  Catalog cat = fixture_catalog();
  SimilarityModel sim;
  Benchmark bench = toy_benchmark();
  EvalParams params;
  params.folds = 2;

  EvalReport report = cross_validate(bench, cat, sim, params);
  CHECK(report.benchmark == "toy");
  CHECK(report.records == 5);
  CHECK(report.trials.size() == 2);

  // records 1-3 map correctly; record 4's gold mapping is wrong on purpose
  CHECK(outcome_for(report, 0).kw_correct);
  CHECK(outcome_for(report, 1).kw_correct);
  CHECK(outcome_for(report, 2).kw_correct);
  CHECK(!outcome_for(report, 3).kw_correct);

  // records 1, 2 and 4 produce the gold query; record 3's gold has an extra
  // predicate no keyword asked for
  CHECK(outcome_for(report, 0).fq_correct);
  CHECK(outcome_for(report, 1).fq_correct);
  CHECK(!outcome_for(report, 2).fq_correct);
  CHECK(outcome_for(report, 3).fq_correct);

  // record 5 has no join path, but its keyword mapping still scores
  const RecordOutcome& failed = outcome_for(report, 4);
  CHECK(failed.failed);
  CHECK(!failed.failure.empty());
  CHECK(failed.kw_correct);
  CHECK(!failed.fq_correct);

  CHECK(report.kw_correct == 4);
  CHECK(report.fq_correct == 3);
  CHECK(report.failures == 1);
  CHECK(report.kw_accuracy == doctest::Approx(80.0));
  CHECK(report.fq_accuracy == doctest::Approx(60.0));

  CHECK(outcome_for(report, 0).top_sql ==
        "SELECT title FROM book WHERE year = 1990");
}

TEST_CASE("fold partition covers every record exactly once") {
  Catalog cat = fixture_catalog();
  SimilarityModel sim;
  std::string record = R"({"keywords": [{"keyword": "title", "context": "select"}],
    "gold_sql": "SELECT title FROM book;", "gold_map": ["book.title"]})";
  std::string text = "[" + record;
  for (int i = 1; i < 10; ++i) text += "," + record;
  text += "]";
  Benchmark bench = load_benchmark_text(text, "tenfold");
  EvalParams params;
  params.folds = 4;

  EvalReport report = cross_validate(bench, cat, sim, params);
  REQUIRE(report.trials.size() == 4);
  // 10 records over 4 folds: the remainder goes to the first folds
  CHECK(report.trials[0].test.size() == 3);
  CHECK(report.trials[1].test.size() == 3);
  CHECK(report.trials[2].test.size() == 2);
  CHECK(report.trials[3].test.size() == 2);

  std::set<size_t> tested;
  for (const TrialResult& trial : report.trials) {
    CHECK(trial.train.size() + trial.test.size() == 10);
    std::set<size_t> train(trial.train.begin(), trial.train.end());
    for (size_t idx : trial.test) {
      CHECK(!train.count(idx));       // held-out gold never trains its trial
      CHECK(tested.insert(idx).second);  // tested in exactly one trial
    }
    CHECK(trial.outcomes.size() == trial.test.size());
  }
  CHECK(tested.size() == 10);

  CHECK(report.kw_accuracy == doctest::Approx(100.0));
  CHECK(report.fq_accuracy == doctest::Approx(100.0));
}

TEST_CASE("held-out gold does not feed the trial graph") {
  Catalog cat = fixture_catalog();
  SimilarityModel sim;
  // "alph" matches 'Alpha Codex' (book.title) more closely than
  // 'Alphabet One' (book.subtitle), and the probe's gold picks the weaker
  // candidate; only co-occurrence evidence from the probe's own gold query
  // could flip the choice.
  Benchmark bench = load_benchmark_text(R"([
    {
      "keywords": [{"keyword": "year", "context": "select"},
                   {"keyword": "alph"}],
      "gold_sql": "SELECT year FROM book WHERE subtitle = 'Alphabet One';",
      "gold_map": ["book.year", "book.subtitle = 'Alphabet One'"]
    },
    {
      "keywords": [{"keyword": "year", "context": "select"}],
      "gold_sql": "SELECT year FROM book;",
      "gold_map": ["book.year"]
    },
    {
      "keywords": [{"keyword": "year", "context": "select"}],
      "gold_sql": "SELECT year FROM book;",
      "gold_map": ["book.year"]
    },
    {
      "keywords": [{"keyword": "year", "context": "select"}],
      "gold_sql": "SELECT year FROM book;",
      "gold_map": ["book.year"]
    }
  ])");
  EvalParams params;
  params.folds = 4;
  params.translate.mapper.lambda = 0.5;

  // Sanity: with the probe's own gold in the graph the flip would happen.
  FragmentGraph leaked(params.level);
  for (const TaskRecord& rec : bench.records)
    leaked.add_query(extract_fragments(parse_query(rec.gold_sql)));
  TranslateOutput flipped = translate(cat, sim, &leaked,
                                      bench.records[0].tasks, params.translate);
  REQUIRE(!flipped.mapping.configs.empty());
  CHECK(flipped.mapping.chosen(flipped.mapping.configs[0], 1).attribute ==
        "book.subtitle");

  // Under cross-validation the probe trains on the other records only, so
  // the similarity order must stand and the probe stays incorrect.
  EvalReport report = cross_validate(bench, cat, sim, params);
  CHECK(!outcome_for(report, 0).kw_correct);
  CHECK(!outcome_for(report, 0).fq_correct);
  CHECK(outcome_for(report, 1).kw_correct);
  CHECK(outcome_for(report, 1).fq_correct);
  CHECK(report.kw_correct == 3);
  CHECK(report.fq_correct == 3);
}

TEST_CASE("leave-one-out and reports are deterministic") {
  Catalog cat = fixture_catalog();
  SimilarityModel sim;
  Benchmark bench = toy_benchmark();
  EvalParams params;
  params.folds = 5;

  EvalReport a = cross_validate(bench, cat, sim, params);
  REQUIRE(a.trials.size() == 5);
  for (const TrialResult& trial : a.trials) {
    CHECK(trial.test.size() == 1);
    CHECK(trial.train.size() == 4);
  }
  CHECK(a.kw_correct == 4);
  CHECK(a.fq_correct == 3);

  EvalReport b = cross_validate(bench, cat, sim, params);
  CHECK(render_report_json(a) == render_report_json(b));
  CHECK(render_report_text(a) == render_report_text(b));

  // this benchmark's outcomes do not depend on the fold split, so a
  // different seed moves records between folds but keeps the totals
  params.seed = 7;
  EvalReport c = cross_validate(bench, cat, sim, params);
  CHECK(c.kw_correct == 4);
  CHECK(c.fq_correct == 3);
}

TEST_CASE("evaluation parameter validation") {
  Catalog cat = fixture_catalog();
  SimilarityModel sim;
  Benchmark bench = toy_benchmark();

  EvalParams one;
  one.folds = 1;
  CHECK(thrown_code([&] { cross_validate(bench, cat, sim, one); }) ==
        ErrorCode::InvalidArgument);

  EvalParams six;
  six.folds = 6;  // more folds than records
  CHECK(thrown_code([&] { cross_validate(bench, cat, sim, six); }) ==
        ErrorCode::InvalidArgument);

  Benchmark nogold = load_benchmark_text(R"([
    {"keywords": [{"keyword": "title", "context": "select"}],
     "gold_sql": "SELECT title FROM book;", "gold_map": ["book.title"]},
    {"keywords": [{"keyword": "title", "context": "select"}]}
  ])");
  EvalParams params;
  params.folds = 2;
  std::string msg =
      thrown_message([&] { cross_validate(nogold, cat, sim, params); });
  CHECK(msg.find("record 2") != std::string::npos);
  CHECK(thrown_code([&] { cross_validate(nogold, cat, sim, params); }) ==
        ErrorCode::FormatError);
}

TEST_CASE("record scoring helpers") {
  Catalog cat = fixture_catalog();
  SimilarityModel sim;
  FragmentGraph graph(ObscurityLevel::NoConstOp);
  Benchmark bench = toy_benchmark();
  const TaskRecord& rec = bench.records[3];  // select "title", gold matches

  TranslateOutput out =
      translate(cat, sim, &graph, rec.tasks, TranslateParams{});
  TaskRecord gold = rec;
  gold.gold_map = {"book.title"};
  auto [kw, fq] = score_record(out, gold);
  CHECK(kw);
  CHECK(fq);

  // a rank-1 tie forfeits full-query credit even when the SQL matches
  out.tied = true;
  auto [kw2, fq2] = score_record(out, gold);
  CHECK(kw2);
  CHECK(!fq2);

  out.tied = false;
  gold.gold_map = {"book.title", "book.year = 1990"};
  CHECK(thrown_code([&] { score_record(out, gold); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("report rendering") {
  Catalog cat = fixture_catalog();
  SimilarityModel sim;
  Benchmark bench = toy_benchmark();
  EvalParams params;
  params.folds = 2;
  EvalReport report = cross_validate(bench, cat, sim, params);

  std::string text = render_report_text(report);
  CHECK(text.find("benchmark 'toy': 5 records, 2 folds, seed 42") !=
        std::string::npos);
  CHECK(text.find("obscurity noconstop, kappa 5, lambda 0.8, weights log") !=
        std::string::npos);
  CHECK(text.find("KW accuracy 80.0% (4/5)") != std::string::npos);
  CHECK(text.find("FQ accuracy 60.0% (3/5)") != std::string::npos);
  CHECK(text.find("failures 1") != std::string::npos);
  CHECK(text.find("FAILED (kw=yes)") != std::string::npos);
  CHECK(text.find("trial 1: train 2, test 3") != std::string::npos);

  nlohmann::json j = nlohmann::json::parse(render_report_json(report));
  CHECK(j["benchmark"] == "toy");
  CHECK(j["records"] == 5);
  CHECK(j["folds"] == 2);
  CHECK(j["kw_accuracy"] == doctest::Approx(80.0));
  CHECK(j["fq_accuracy"] == doctest::Approx(60.0));
  CHECK(j["failures"] == 1);
  REQUIRE(j["trials"].size() == 2);
  size_t outcomes = 0;
  bool saw_failure = false;
  for (const auto& trial : j["trials"]) {
    outcomes += trial["outcomes"].size();
    for (const auto& o : trial["outcomes"])
      if (o["record"] == 4) {
        CHECK(o["failed"] == true);
        CHECK(o["kw_correct"] == true);
        CHECK(o.contains("failure"));
        saw_failure = true;
      }
  }
  CHECK(outcomes == 5);
  CHECK(saw_failure);
}
