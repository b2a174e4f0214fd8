#include "fmeval/corpus.hpp"

#include <doctest.h>

#include <algorithm>

#include <nlohmann/json.hpp>

#include "fmeval/errors.hpp"

using namespace fmeval;
using nlohmann::json;

namespace {

json minimal_record() {
  return json{
      {"article", "Full article text."},
      {"human", "BACKGROUND: b. METHODS: m. RESULTS: r. CONCLUSIONS: c."},
      {"gpt35", "generated summary text"},
      {"gpt35_aspect", {{"background", "b"}, {"method", "m"}, {"result", "r"}, {"conclusion", ""}}},
      {"gpt35_human", 0.5},
      {"gpt35_human_list", {3, 4, 2, 1}},
  };
}

}  // namespace

TEST_CASE("load_corpus normalizes flattened release keys") {
  json doc = json::array({minimal_record()});
  doc[0]["gpt35_gpt4_fm"] = 0.66;
  doc[0]["gpt35_gpt4_fm_list"] = {3, 3, 4, 2};
  const Corpus corpus = load_corpus_json(doc, "pubmed_test");

  REQUIRE(corpus.records().size() == 1);
  const PaperRecord& record = corpus.records()[0];
  CHECK(record.dataset == Dataset::pubmed);
  CHECK(record.generated.at("gpt35") == "generated summary text");
  CHECK(record.human_overall.at("gpt35") == 0.5);
  CHECK(record.human_facets.at("gpt35") == std::array<int, 4>{3, 4, 2, 1});
  CHECK(record.fm_overall.at({"gpt35", "gpt4"}) == 0.66);
  CHECK(record.fm_facets.at({"gpt35", "gpt4"}) == std::array<int, 4>{3, 3, 4, 2});

  const auto& systems = corpus.systems();
  CHECK(std::find(systems.begin(), systems.end(), "gpt35") != systems.end());
  const auto& judges = corpus.judges();
  CHECK(std::find(judges.begin(), judges.end(), "human") != judges.end());
  CHECK(std::find(judges.begin(), judges.end(), "gpt4") != judges.end());

  // aspect: empty string -> absent facet
  const FacetSet& facets = record.facet_sets.at("gpt35");
  CHECK(facets.has(FacetKind::background));
  CHECK_FALSE(facets.has(FacetKind::conclusion));
}

TEST_CASE("multi-underscore system names resolve against known systems") {
  json doc = json::array({minimal_record()});
  doc[0]["llama2_70b"] = "llama summary";
  doc[0]["llama2_70b_human"] = 0.77;
  doc[0]["llama2_70b_gpt4_fm"] = 0.71;
  const Corpus corpus = load_corpus_json(doc, "pubmed_test");
  const PaperRecord& record = corpus.records()[0];
  CHECK(record.human_overall.at("llama2_70b") == 0.77);
  CHECK(record.fm_overall.at({"llama2_70b", "gpt4"}) == 0.71);
}

TEST_CASE("empty list file loads as an empty corpus") {
  const Corpus corpus = load_corpus_json(json::array(), "anything");
  CHECK(corpus.records().empty());
  CHECK(corpus.systems().empty());
  CHECK(corpus.judges().empty());
}

TEST_CASE("score outside [0,1] raises RangeError naming the field") {
  json doc = json::array({minimal_record()});
  doc[0]["gpt35_human"] = 1.7;
  try {
    load_corpus_json(doc, "x");
    FAIL("expected RangeError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::range_error);
    CHECK(std::string(e.what()).find("gpt35_human") != std::string::npos);
  }
}

TEST_CASE("schema violations are reported with the record index") {
  SUBCASE("missing article") {
    json doc = json::array({json{{"human", "h"}}});
    try {
      load_corpus_json(doc, "x");
      FAIL("expected SchemaError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::schema_error);
      CHECK(std::string(e.what()).find("article") != std::string::npos);
      CHECK(std::string(e.what()).find("record 0") != std::string::npos);
    }
  }
  SUBCASE("facet list of wrong length") {
    json doc = json::array({minimal_record()});
    doc[0]["gpt35_human_list"] = {3, 4};
    CHECK_THROWS_AS(load_corpus_json(doc, "x"), Error);
  }
  SUBCASE("facet rating above its scale") {
    json doc = json::array({minimal_record()});
    doc[0]["gpt35_human_list"] = {4, 4, 4, 3};  // background max is 3
    try {
      load_corpus_json(doc, "x");
      FAIL("expected RangeError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::range_error);
    }
  }
  SUBCASE("duplicate ids") {
    json a = minimal_record();
    a["id"] = "same";
    json doc = json::array({a, a});
    CHECK_THROWS_AS(load_corpus_json(doc, "x"), Error);
  }
}

TEST_CASE("0 facet sentinel is accepted") {
  json doc = json::array({minimal_record()});
  doc[0]["gpt35_human_list"] = {0, 4, 2, 3};
  const Corpus corpus = load_corpus_json(doc, "x");
  CHECK(corpus.records()[0].human_facets.at("gpt35")[0] == 0);
}

TEST_CASE("unknown fields are preserved through serialize") {
  json doc = json::array({minimal_record()});
  doc[0]["custom_note"] = json{{"a", 1}};
  const Corpus corpus = load_corpus_json(doc, "x");
  const std::string text = serialize(corpus);
  CHECK(text.find("custom_note") != std::string::npos);
}

TEST_CASE("load after serialize is the identity on the validated field set") {
  json doc = json::array({minimal_record(), minimal_record()});
  doc[0]["id"] = "r1";
  doc[1]["id"] = "r2";
  doc[1]["llama2_70b"] = "other summary";
  doc[1]["llama2_70b_gpt4_fm"] = 0.25;
  doc[1]["dataset"] = "arxiv";
  const Corpus first = load_corpus_json(doc, "x");
  const std::string once = serialize(first);
  const Corpus second = load_corpus_json(json::parse(once), "x");
  const std::string twice = serialize(second);
  CHECK(once == twice);

  CHECK(second.records()[0].id == "r1");
  CHECK(second.records()[1].dataset == Dataset::arxiv);
  CHECK(second.records()[1].fm_overall.at({"llama2_70b", "gpt4"}) == 0.25);
}

TEST_CASE("system_scores returns record-ordered values and reports gaps") {
  json a = minimal_record();
  a["id"] = "r1";
  json b = minimal_record();
  b["id"] = "r2";
  b.erase("gpt35_human");
  const Corpus corpus = load_corpus_json(json::array({a, b}), "x");

  const SystemScores scores = system_scores(corpus, "gpt35", "human_overall");
  CHECK(scores.scores.values == std::vector<double>{0.5});
  CHECK(scores.excluded_ids == std::vector<std::string>{"r2"});

  SUBCASE("single-record corpus") {
    const Corpus one = load_corpus_json(json::array({a}), "x");
    CHECK(system_scores(one, "gpt35", "human_overall").scores.values ==
          std::vector<double>{0.5});
  }
  SUBCASE("unknown system") {
    CHECK_THROWS_AS(system_scores(corpus, "nosuch", "human_overall"), Error);
    try {
      system_scores(corpus, "nosuch", "human_overall");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unknown_system);
    }
  }
  SUBCASE("unknown column") {
    try {
      system_scores(corpus, "gpt35", "bertscore");
      FAIL("expected UnknownColumn");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unknown_column);
    }
  }
}

TEST_CASE("system_scores is order-stable across calls") {
  json a = minimal_record();
  a["id"] = "r1";
  json b = minimal_record();
  b["id"] = "r2";
  b["gpt35_human"] = 0.9;
  const Corpus corpus = load_corpus_json(json::array({a, b}), "x");
  const auto first = system_scores(corpus, "gpt35", "human_overall").scores.values;
  const auto second = system_scores(corpus, "gpt35", "human_overall").scores.values;
  CHECK(first == second);
  CHECK(first == std::vector<double>{0.5, 0.9});
}

TEST_CASE("import_metric_column round trip and error cases") {
  json a = minimal_record();
  a["id"] = "r1";
  json b = minimal_record();
  b["id"] = "r2";
  const Corpus corpus = load_corpus_json(json::array({a, b}), "x");

  const Corpus with = import_metric_column(corpus, "bertscore", {{"r1", 0.84}, {"r2", 0.80}});
  CHECK(system_scores(with, "gpt35", "bertscore").scores.values ==
        std::vector<double>{0.84, 0.80});
  // original unchanged
  CHECK_THROWS_AS(system_scores(corpus, "gpt35", "bertscore"), Error);

  SUBCASE("per-system keys") {
    const Corpus per = import_metric_column(corpus, "questeval", {{"r1::gpt35", 0.23}});
    const SystemScores scores = system_scores(per, "gpt35", "questeval");
    CHECK(scores.scores.values == std::vector<double>{0.23});
    CHECK(scores.excluded_ids == std::vector<std::string>{"r2"});
  }
  SUBCASE("unknown id is named") {
    try {
      import_metric_column(corpus, "m", {{"ghost", 1.0}});
      FAIL("expected UnknownId");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::unknown_id);
      CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
  }
  SUBCASE("reserved and duplicate names") {
    CHECK_THROWS_AS(import_metric_column(corpus, "human_overall", {{"r1", 1.0}}), Error);
    CHECK_THROWS_AS(import_metric_column(with, "bertscore", {{"r1", 1.0}}), Error);
  }
  SUBCASE("imported column round-trips through serialize") {
    const Corpus reloaded = load_corpus_json(json::parse(serialize(with)), "x");
    CHECK(system_scores(reloaded, "gpt35", "bertscore").scores.values ==
          std::vector<double>{0.84, 0.80});
  }
}

TEST_CASE("validate_release checks the benchmark structure") {
  json record = minimal_record();
  json doc = json::array();
  for (int i = 0; i < 50; ++i) {
    json r = record;
    r["id"] = "pm" + std::to_string(i);
    r["dataset"] = "pubmed";
    for (const char* s : {"s1", "s2", "s3", "s4", "s5"}) r[s] = "text";
    doc.push_back(r);
  }
  for (int i = 0; i < 50; ++i) {
    json r = record;
    r["id"] = "ax" + std::to_string(i);
    r["dataset"] = "arxiv";
    for (const char* s : {"s1", "s2", "s3", "s4"}) r[s] = "text";
    doc.push_back(r);
  }
  // 50 * (5+1 gpt35) = 300 pubmed + 50 * (4+1) = 250 arxiv -> 550, not 500
  const Corpus corpus = load_corpus_json(doc, "x");
  const ValidationReport bad = validate_release(corpus);
  CHECK_FALSE(bad.passed);

  json doc2 = json::array();
  for (int i = 0; i < 50; ++i) {
    json r = record;
    r["id"] = "pm" + std::to_string(i);
    r["dataset"] = "pubmed";
    for (const char* s : {"s1", "s2", "s3", "s4", "s5"}) r[s] = "text";
    doc2.push_back(r);
  }
  for (int i = 0; i < 50; ++i) {
    json r = record;
    r.erase("gpt35");
    r.erase("gpt35_aspect");
    r.erase("gpt35_human");
    r.erase("gpt35_human_list");
    r["id"] = "ax" + std::to_string(i);
    r["dataset"] = "arxiv";
    for (const char* s : {"t1", "t2", "t3", "t4"}) r[s] = "text";
    doc2.push_back(r);
  }
  // 50 * 6 + 50 * 4 = 500
  const ValidationReport good = validate_release(load_corpus_json(doc2, "x"));
  CHECK(good.passed);
}

TEST_CASE("observation grid and columns support pooled analysis") {
  json a = minimal_record();
  a["id"] = "r1";
  a["llama2_70b"] = "l";
  a["llama2_70b_human"] = 0.9;
  json b = minimal_record();
  b["id"] = "r2";
  const Corpus corpus = load_corpus_json(json::array({a, b}), "x");
  const auto grid = observation_grid(corpus);
  CHECK(grid.size() == corpus.records().size() * corpus.systems().size());
  const AlignedColumn column = observation_column(corpus, "human_overall", grid);
  int defined = 0;
  for (const auto& v : column.values) defined += v.has_value() ? 1 : 0;
  CHECK(defined == 3);  // r1:gpt35, r1:llama2_70b, r2:gpt35
}
