// Acceptance suite. Each criterion prints one line:
//   [PASS] / [FAIL] for criteria that run here,
//   [SKIP] with the recorded reason for criteria conditional on the released
//   benchmark corpus (set FMEVAL_SCHOLARSUM_DIR to a directory of release
//   JSON files to run them); spec-named stand-ins run in their place.

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "fmeval/baseline_metrics.hpp"
#include "fmeval/corpus.hpp"
#include "fmeval/errors.hpp"
#include "fmeval/fm_scoring.hpp"
#include "fmeval/llm_backend.hpp"
#include "fmeval/meta_eval.hpp"
#include "fmeval/pipeline.hpp"
#include "fmeval/text.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace fmeval;

namespace {

const fs::path kFixtures = FMEVAL_FIXTURES_DIR;

void announce(int criterion, const std::string& status, const std::string& text) {
  std::cout << "[" << status << "] criterion " << criterion << ": " << text << std::endl;
}

std::optional<fs::path> release_dir() {
  if (const char* dir = std::getenv("FMEVAL_SCHOLARSUM_DIR"); dir && *dir) return fs::path(dir);
  return std::nullopt;
}

constexpr const char* kSkipReason =
    "released benchmark corpus not available in this environment "
    "(set FMEVAL_SCHOLARSUM_DIR to run)";

const Corpus& scholarsum() {
  static Corpus corpus = load_corpus(*release_dir());
  return corpus;
}

std::string normalize_name(std::string_view name) {
  std::string out;
  for (char c : lower_ascii(name)) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

std::optional<std::string> find_by_alias(const std::vector<std::string>& names,
                                         const std::vector<std::string>& aliases) {
  for (const auto& name : names) {
    const std::string normalized = normalize_name(name);
    for (const auto& alias : aliases) {
      if (normalized == alias) return name;
    }
  }
  return std::nullopt;
}

double pooled_spearman(const std::vector<double>& metric, const std::vector<double>& human) {
  ScoreVector x{metric, "metric"};
  ScoreVector y{human, "human"};
  return spearman(x, y).rho;
}

struct PooledColumns {
  std::vector<double> human;
  std::vector<double> fm;
  std::vector<double> rouge_flat;
  // Restricted to rows where both facet sets exist, kept aligned.
  std::vector<double> rouge_facet;
  std::vector<double> rouge_flat_for_facet;
  std::vector<double> human_for_facet;
};

// Pooled (record, system) observations over one dataset split of the release.
PooledColumns pool_release_columns(const Corpus& corpus, Dataset split,
                                   const std::string& fm_judge) {
  PooledColumns out;
  for (const auto& record : corpus.records()) {
    if (record.dataset != split) continue;
    for (const auto& [system, text] : record.generated) {
      const auto human_it = record.human_overall.find(system);
      if (human_it == record.human_overall.end()) continue;
      const auto fm_it = record.fm_overall.find({system, fm_judge});
      if (fm_it == record.fm_overall.end()) continue;
      out.human.push_back(human_it->second);
      out.fm.push_back(fm_it->second);
      out.rouge_flat.push_back(rouge_l(record.human_summary, text).f1);
      const auto ref_facets = record.facet_sets.find("human");
      const auto gen_facets = record.facet_sets.find(system);
      if (ref_facets != record.facet_sets.end() && gen_facets != record.facet_sets.end() &&
          ref_facets->second.present_count() > 0) {
        const FacetMetricScore decomposed = facet_metric(
            ref_facets->second, gen_facets->second, WeightVector::defaults(), RougeVariant::rougeL);
        if (decomposed.overall) {
          out.rouge_facet.push_back(*decomposed.overall);
          out.rouge_flat_for_facet.push_back(out.rouge_flat.back());
          out.human_for_facet.push_back(human_it->second);
        }
      }
    }
  }
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("criterion 1: aggregation oracle") {
  std::mt19937 rng(20240501);
  std::uniform_real_distribution<double> uni(0.001, 1.0);
  std::vector<std::array<double, 4>> weight_sets = {{0.1, 0.3, 0.3, 0.3}};
  for (int i = 0; i < 49; ++i) {
    weight_sets.push_back({uni(rng), uni(rng), uni(rng), uni(rng)});
  }
  int mismatches = 0;
  int combos = 0;
  for (int b = 1; b <= 3; ++b) {
    for (int m = 1; m <= 4; ++m) {
      for (int r = 1; r <= 4; ++r) {
        for (int c = 1; c <= 3; ++c) {
          ++combos;
          std::array<FacetRating, 4> ratings = {
              make_rating(FacetKind::background, b), make_rating(FacetKind::method, m),
              make_rating(FacetKind::result, r), make_rating(FacetKind::conclusion, c)};
          for (const auto& w : weight_sets) {
            const double got = aggregate(ratings, WeightVector{w});
            const double expected =
                oracle::aggregate_bf({b, m, r, c}, {3, 4, 4, 3}, {false, false, false, false}, w);
            if (got != expected) ++mismatches;
          }
        }
      }
    }
  }
  CHECK(combos == 144);
  CHECK(mismatches == 0);
  announce(1, mismatches == 0 ? "PASS" : "FAIL",
           "aggregate matches brute force on all 144 rating combinations x 50 weight vectors "
           "exactly");
}

namespace {

std::string tokens_to_text(const std::vector<int>& tokens) {
  std::string out;
  for (int t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out.push_back(static_cast<char>('a' + t));
  }
  return out;
}

std::size_t lcs_via_rouge(const std::vector<int>& ref, const std::vector<int>& hyp) {
  if (ref.empty()) return 0;
  const RougeScore score = rouge_l(tokens_to_text(ref), tokens_to_text(hyp));
  return static_cast<std::size_t>(std::lround(score.recall * ref.size()));
}

}  // namespace

TEST_CASE("criterion 2: rouge-l lcs oracle") {
  int mismatches = 0;

  // Exhaustive over the binary alphabet for all pairs of lengths 0..6.
  std::vector<std::vector<int>> short_seqs;
  for (int len = 0; len <= 6; ++len) {
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::vector<int> seq(len);
      for (int i = 0; i < len; ++i) seq[i] = (mask >> i) & 1;
      short_seqs.push_back(std::move(seq));
    }
  }
  for (const auto& a : short_seqs) {
    if (a.empty()) continue;
    for (const auto& b : short_seqs) {
      if (b.empty()) continue;
      if (lcs_via_rouge(a, b) != oracle::lcs_exhaustive(a, b)) ++mismatches;
    }
  }

  // Random pairs at lengths 7..12 against the exhaustive oracle.
  std::mt19937 rng(7777);
  std::uniform_int_distribution<int> len(7, 12);
  std::uniform_int_distribution<int> tok(0, 2);
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<int> a(len(rng));
    std::vector<int> b(len(rng));
    for (int& t : a) t = tok(rng);
    for (int& t : b) t = tok(rng);
    if (lcs_via_rouge(a, b) != oracle::lcs_exhaustive(a, b)) ++mismatches;
  }

  // 1000 random longer pairs against the memoized recurrence.
  std::uniform_int_distribution<int> long_len(13, 30);
  std::uniform_int_distribution<int> long_tok(0, 4);
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<int> a(long_len(rng));
    std::vector<int> b(long_len(rng));
    for (int& t : a) t = long_tok(rng);
    for (int& t : b) t = long_tok(rng);
    if (lcs_via_rouge(a, b) != oracle::lcs_memo(a, b)) ++mismatches;
  }

  CHECK(mismatches == 0);
  announce(2, mismatches == 0 ? "PASS" : "FAIL",
           "LCS equals the exhaustive-subsequence oracle on sequences up to length 12 and the "
           "memoized recurrence on 1000 longer pairs");
}

TEST_CASE("criterion 3: statistics oracles") {
  bool ok = true;
  std::mt19937 rng(31415);
  std::uniform_int_distribution<int> len(2, 10);
  std::uniform_int_distribution<int> grades(0, 5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // spearman + pearson
  int checked = 0;
  while (checked < 500) {
    const int n = len(rng);
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (auto& v : x) v = grades(rng) / 5.0;
    for (auto& v : y) v = grades(rng) / 5.0;
    const bool cx = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    const bool cy = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (cx || cy) continue;
    ++checked;
    const double s = spearman(ScoreVector{x, "x"}, ScoreVector{y, "y"}).rho;
    const double p = pearson(ScoreVector{x, "x"}, ScoreVector{y, "y"}).rho;
    if (std::fabs(s - oracle::spearman_bf(x, y)) > 1e-9) ok = false;
    if (std::fabs(p - oracle::pearson_bf(x, y)) > 1e-9) ok = false;
  }

  // kappa
  checked = 0;
  std::uniform_int_distribution<int> label(1, 4);
  while (checked < 500) {
    const int n = len(rng);
    std::vector<int> a(n);
    std::vector<int> b(n);
    for (auto& v : a) v = label(rng);
    for (auto& v : b) v = label(rng);
    try {
      const AgreementResult got = cohens_kappa(a, b, 4);
      const auto expected = oracle::kappa_bf(a, b, 4);
      if (std::fabs(got.kappa - expected.kappa) > 1e-9) ok = false;
      if (std::fabs(got.observed_agreement - expected.p_o) > 1e-9) ok = false;
      ++checked;
    } catch (const Error&) {
    }
  }

  // bootstrap
  for (int iter = 0; iter < 500; ++iter) {
    const int n = 1 + iter % 10;
    std::vector<double> values(n);
    for (auto& v : values) v = uni(rng);
    const auto got = bootstrap(ScoreVector{values, "v"}, Statistic::mean, 40, iter);
    const auto expected = oracle::bootstrap_bf(values, 40, iter);
    if (std::fabs(got.ci_low - expected.ci_low) > 1e-9) ok = false;
    if (std::fabs(got.ci_high - expected.ci_high) > 1e-9) ok = false;
    if (std::fabs(got.iqr - expected.iqr) > 1e-9) ok = false;
    if (std::fabs(got.point - expected.point) > 1e-9) ok = false;
  }

  // ordinary least squares
  checked = 0;
  std::uniform_int_distribution<int> rows(4, 10);
  while (checked < 500) {
    const int n = rows(rng);
    std::vector<std::array<double, 4>> x;
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
      x.push_back({uni(rng), uni(rng), uni(rng), uni(rng)});
      y.push_back(uni(rng));
    }
    std::array<double, 4> expected;
    try {
      expected = oracle::ols_bf(x, y);
    } catch (const std::runtime_error&) {
      continue;
    }
    double norm = 0.0;
    for (double w : expected) norm = std::max(norm, std::fabs(w));
    if (norm > 1e3) continue;  // ill-conditioned draw; agreement at 1e-9 is not meaningful
    ++checked;
    const WeightFit fit = fit_weights(x, ScoreVector{y, "y"});
    for (int j = 0; j < 4; ++j) {
      if (std::fabs(fit.raw[j] - expected[j]) > 1e-9 * std::max(1.0, norm)) ok = false;
    }
  }

  // Worked examples, asserted exactly.
  ok = ok &&
       std::fabs(spearman(ScoreVector{{1, 2, 3, 4}, "x"}, ScoreVector{{1, 3, 2, 4}, "y"}).rho -
                 0.8) < 1e-12;
  ok = ok && std::fabs(pearson(ScoreVector{{0, 1, 2}, "x"}, ScoreVector{{0, 2, 4}, "y"}).rho -
                       1.0) < 1e-12;
  {
    const AgreementResult opposite = cohens_kappa({1, 1, 2, 2}, {2, 2, 1, 1}, 2);
    ok = ok && opposite.observed_agreement == 0.0 && opposite.expected_agreement == 0.5 &&
         opposite.kappa == -1.0;
    const AgreementResult half = cohens_kappa({1, 1, 1, 2}, {1, 1, 2, 2}, 2);
    ok = ok && half.observed_agreement == 0.75 && half.kappa == 0.5;
  }

  CHECK(ok);
  announce(3, ok ? "PASS" : "FAIL",
           "spearman/pearson/kappa/bootstrap/OLS match independent brute force on 500 random "
           "inputs each (|delta| <= 1e-9) and the worked examples hold exactly");
}

TEST_CASE("criterion 4: released human column means (Tables 2 and 3)") {
  if (!release_dir()) {
    announce(4, "SKIP", std::string("Table 2/3 human column reproduction; ") + kSkipReason);
    return;
  }
  const Corpus& corpus = scholarsum();
  const struct {
    Dataset split;
    std::vector<std::string> aliases;
    double expected;
  } targets[] = {
      {Dataset::pubmed, {"llama2", "llama270b", "llama"}, 0.7704},
      {Dataset::pubmed, {"longt5", "longt5large"}, 0.7241},
      {Dataset::pubmed, {"gpt35", "gpt3"}, 0.6780},
      {Dataset::pubmed, {"longt5block"}, 0.6782},
      {Dataset::pubmed, {"bigbird", "bigbirdpegasus", "bigbirdpegasuslarge"}, 0.6186},
      {Dataset::pubmed, {"bigbirdblock"}, 0.6317},
      {Dataset::arxiv, {"gpt35", "gpt3"}, 0.6385},
      {Dataset::arxiv, {"llama2", "llama270b", "llama"}, 0.7155},
      {Dataset::arxiv, {"factsum"}, 0.6843},
      {Dataset::arxiv, {"bartlarge", "bart"}, 0.6231},
  };
  bool ok = true;
  int matched = 0;
  for (const auto& target : targets) {
    const auto system = find_by_alias(corpus.systems(), target.aliases);
    if (!system) continue;
    std::vector<double> values;
    for (const auto& record : corpus.records()) {
      if (record.dataset != target.split) continue;
      const auto it = record.human_overall.find(*system);
      if (it != record.human_overall.end()) values.push_back(it->second);
    }
    if (values.empty()) continue;
    ++matched;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    CHECK(std::fabs(mean - target.expected) <= 1e-3);
    if (std::fabs(mean - target.expected) > 1e-3) ok = false;
  }
  CHECK(matched >= 3);
  if (matched < 3) ok = false;
  announce(4, ok ? "PASS" : "FAIL",
           "released human_overall system means match Tables 2/3 within 1e-3 (" +
               std::to_string(matched) + " systems matched)");
}

TEST_CASE("criterion 5: FM(GPT-4) vs human correlation on released scores") {
  if (!release_dir()) {
    announce(5, "SKIP",
             std::string("Spearman(FM(GPT-4), human) = 0.69 +/- 0.05 and FM > ROUGE-L; ") +
                 kSkipReason);
    return;
  }
  const Corpus& corpus = scholarsum();
  const auto judge = find_by_alias(corpus.judges(), {"gpt4"});
  REQUIRE_MESSAGE(judge.has_value(), "release lacks a gpt4 judge column");
  const PooledColumns pooled = pool_release_columns(corpus, Dataset::pubmed, *judge);
  REQUIRE(pooled.human.size() >= 2);
  const double fm_rho = pooled_spearman(pooled.fm, pooled.human);
  const double rouge_rho = pooled_spearman(pooled.rouge_flat, pooled.human);
  CHECK(std::fabs(fm_rho - 0.69) <= 0.05);
  CHECK(fm_rho > rouge_rho);
  const bool ok = std::fabs(fm_rho - 0.69) <= 0.05 && fm_rho > rouge_rho;
  announce(5, ok ? "PASS" : "FAIL",
           "FM(GPT-4)-vs-human Spearman = " + std::to_string(fm_rho) + ", ROUGE-L = " +
               std::to_string(rouge_rho));
}

TEST_CASE("criterion 6: weight fit on released human scores") {
  if (!release_dir()) {
    announce(6, "SKIP",
             std::string("fitted weights within 0.05 of [0.1,0.3,0.3,0.3], MSE <= 0.01; ") +
                 kSkipReason);
    return;
  }
  const Corpus& corpus = scholarsum();
  std::vector<std::array<double, 4>> x;
  ScoreVector y;
  for (const auto& record : corpus.records()) {
    for (const auto& [system, facets] : record.human_facets) {
      const auto overall = record.human_overall.find(system);
      if (overall == record.human_overall.end()) continue;
      bool complete = true;
      std::array<double, 4> row{};
      for (int k = 0; k < 4; ++k) {
        if (facets[k] == 0) {
          complete = false;
          break;
        }
        row[k] = static_cast<double>(facets[k]) / facet_scale(static_cast<FacetKind>(k));
      }
      if (!complete) continue;
      x.push_back(row);
      y.values.push_back(overall->second);
    }
  }
  REQUIRE(x.size() >= 4);
  const WeightFit fit = fit_weights(x, y);
  const std::array<double, 4> expected = {0.1, 0.3, 0.3, 0.3};
  bool ok = fit.mse <= 0.01;
  for (int j = 0; j < 4; ++j) {
    CHECK(std::fabs(fit.weights.values[j] - expected[j]) <= 0.05);
    if (std::fabs(fit.weights.values[j] - expected[j]) > 0.05) ok = false;
  }
  CHECK(fit.mse <= 0.01);
  announce(6, ok ? "PASS" : "FAIL", "released weight fit mse=" + std::to_string(fit.mse));
}

TEST_CASE("criterion 7: inter-annotator agreement (Table 1)") {
  if (release_dir()) {
    const Corpus& corpus = scholarsum();
    const auto annot1 = find_by_alias(corpus.judges(), {"annot1", "annotator1", "human1"});
    const auto annot2 = find_by_alias(corpus.judges(), {"annot2", "annotator2", "human2"});
    if (annot1 && annot2) {
      const struct {
        FacetKind kind;
        double kappa;
        double agreement;
      } expected[] = {
          {FacetKind::background, 0.83, 0.91},
          {FacetKind::method, 0.69, 0.78},
          {FacetKind::result, 0.79, 0.86},
          {FacetKind::conclusion, 0.85, 0.90},
      };
      bool ok = true;
      for (const auto& row : expected) {
        const int slot = static_cast<int>(row.kind);
        std::vector<int> a;
        std::vector<int> b;
        for (const auto& record : corpus.records()) {
          for (const auto& [key, list] : record.fm_facets) {
            if (key.second != *annot1) continue;
            const auto other = record.fm_facets.find({key.first, *annot2});
            if (other == record.fm_facets.end()) continue;
            if (list[slot] == 0 || other->second[slot] == 0) continue;
            a.push_back(list[slot]);
            b.push_back(other->second[slot]);
          }
        }
        REQUIRE(a.size() >= 2);
        const AgreementResult result = cohens_kappa(a, b, facet_scale(row.kind));
        CHECK(std::fabs(result.kappa - row.kappa) <= 0.02);
        CHECK(std::fabs(result.observed_agreement - row.agreement) <= 0.02);
        if (std::fabs(result.kappa - row.kappa) > 0.02 ||
            std::fabs(result.observed_agreement - row.agreement) > 0.02) {
          ok = false;
        }
      }
      announce(7, ok ? "PASS" : "FAIL", "Table 1 kappa/agreement reproduced within 0.02");
      return;
    }
    announce(7, "SKIP",
             "release carries no per-annotator labels; the kappa property suite (criterion 3) "
             "stands in");
    return;
  }
  announce(7, "SKIP",
           std::string("Table 1 agreement reproduction; ") + kSkipReason +
               "; the kappa property suite (criterion 3) stands in");
}

TEST_CASE("criterion 8: pipeline determinism over committed replay fixtures") {
  const auto started = std::chrono::steady_clock::now();

  auto run_pipeline = [&](const fs::path& out_dir) {
    RunConfig config;
    config.corpus_path = kFixtures / "mini_pubmed.json";
    config.backend.base_url = "https://api.invalid.example";  // must never be contacted
    config.backend.model = "mock-judge";
    config.backend.cache_dir = kFixtures / "replay_cache";
    config.backend.replay_only = true;
    config.judge = "mock";
    config.out_dir = out_dir;
    config.seed = 42;
    config.resamples = 200;
    REQUIRE(cmd_extract(config).exit_code == 0);
    config.corpus_path = out_dir / "corpus.json";
    REQUIRE(cmd_score(config).exit_code == 0);
    REQUIRE(cmd_baseline(config).exit_code == 0);
    REQUIRE(cmd_meta(config).exit_code == 0);
  };

  const fs::path base =
      fs::temp_directory_path() / ("fmeval_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(base);
  reset_network_call_count();
  run_pipeline(base / "run1");
  run_pipeline(base / "run2");
  const std::uint64_t network_calls = network_call_count();
  CHECK(network_calls == 0);

  const auto run1 = dir_contents(base / "run1");
  const auto run2 = dir_contents(base / "run2");
  REQUIRE(run1.size() == run2.size());
  bool identical = true;
  for (const auto& [name, content] : run1) {
    CAPTURE(name);
    REQUIRE(run2.count(name) == 1);
    CHECK(content == run2.at(name));
    if (content != run2.at(name)) identical = false;
  }
  fs::remove_all(base);

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  CHECK(seconds < 30.0);
  const bool ok = identical && network_calls == 0 && seconds < 30.0;
  announce(8, ok ? "PASS" : "FAIL",
           "extract->score->meta over 12-record replay fixtures is byte-identical across two "
           "runs with zero network calls (" +
               std::to_string(seconds) + " s)");
}

TEST_CASE("criterion 9: statistical power ordering") {
  if (release_dir()) {
    const Corpus& corpus = scholarsum();
    const auto judge = find_by_alias(corpus.judges(), {"gpt4"});
    REQUIRE(judge.has_value());

    // Pooled per-system record columns on the pubmed split.
    auto column_for = [&](const std::string& system, auto getter) {
      ScoreVector out;
      for (const auto& record : corpus.records()) {
        if (record.dataset != Dataset::pubmed) continue;
        const auto value = getter(record, system);
        if (value) out.values.push_back(*value);
      }
      return out;
    };
    auto human_getter = [](const PaperRecord& r, const std::string& s) -> std::optional<double> {
      const auto it = r.human_overall.find(s);
      if (it == r.human_overall.end()) return std::nullopt;
      return it->second;
    };
    auto fm_getter = [&](const PaperRecord& r, const std::string& s) -> std::optional<double> {
      const auto it = r.fm_overall.find({s, *judge});
      if (it == r.fm_overall.end()) return std::nullopt;
      return it->second;
    };
    auto rouge_getter = [](const PaperRecord& r, const std::string& s) -> std::optional<double> {
      const auto it = r.generated.find(s);
      if (it == r.generated.end()) return std::nullopt;
      return rouge_l(r.human_summary, it->second).f1;
    };

    std::vector<std::string> systems;
    for (const auto& record : corpus.records()) {
      if (record.dataset != Dataset::pubmed) continue;
      for (const auto& [system, text] : record.generated) {
        if (std::find(systems.begin(), systems.end(), system) == systems.end()) {
          systems.push_back(system);
        }
      }
    }
    std::sort(systems.begin(), systems.end());

    auto avg_power = [&](auto getter) {
      std::vector<double> powers;
      for (std::size_t i = 0; i < systems.size(); ++i) {
        for (std::size_t j = i + 1; j < systems.size(); ++j) {
          const ScoreVector a = column_for(systems[i], getter);
          const ScoreVector b = column_for(systems[j], getter);
          if (a.size() != b.size() || a.size() < 2) continue;
          powers.push_back(power_analysis(a, b, 1000, 0.05, 42).power);
        }
      }
      double total = 0.0;
      for (double p : powers) total += p;
      return powers.empty() ? 0.0 : total / powers.size();
    };

    const double fm_power = avg_power(fm_getter);
    const double rouge_power = avg_power(rouge_getter);
    CHECK(fm_power >= rouge_power);
    bool ok = fm_power >= rouge_power;

    // QuestEval / ACU columns, when the release ships them.
    for (const char* metric : {"questeval", "acu"}) {
      const auto column = find_by_alias(scholarsum().metric_columns(), {metric});
      if (!column) continue;
      auto metric_getter = [&](const PaperRecord& r,
                               const std::string& s) -> std::optional<double> {
        return corpus.metric_value(*column, r.id, s);
      };
      const double baseline_power = avg_power(metric_getter);
      CHECK(fm_power >= baseline_power);
      if (fm_power < baseline_power) ok = false;
    }
    announce(9, ok ? "PASS" : "FAIL",
             "avg power FM(GPT-4)=" + std::to_string(fm_power) +
                 " >= ROUGE-L=" + std::to_string(rouge_power) + " at alpha=0.05, 1000 resamples");
    return;
  }

  // Stand-in named by the spec: the trivial power cases at the stated
  // protocol parameters.
  const ScoreVector a{{0.5, 0.6, 0.7, 0.4, 0.55, 0.63}, "a"};
  const PowerResult none = power_analysis(a, a, 1000, 0.05, 42);
  ScoreVector shifted = a;
  for (auto& v : shifted.values) v += 10.0;
  const PowerResult certain = power_analysis(shifted, a, 1000, 0.05, 42);
  CHECK(none.power == 0.0);
  CHECK(certain.power == 1.0);
  announce(9, (none.power == 0.0 && certain.power == 1.0) ? "PASS" : "FAIL",
           std::string("power ordering on released columns; ") + kSkipReason +
               "; trivial power cases stand in (a=a -> 0, a+10 vs a -> 1 at alpha=0.05, 1000 "
               "resamples)");
}

TEST_CASE("criterion 10: facet-decomposition gain over flat ROUGE") {
  if (!release_dir()) {
    announce(10, "SKIP",
             std::string("facet-decomposed ROUGE Spearman > flat ROUGE Spearman; ") + kSkipReason);
    return;
  }
  const Corpus& corpus = scholarsum();
  const auto judge = find_by_alias(corpus.judges(), {"gpt4"});
  REQUIRE(judge.has_value());
  const PooledColumns pooled = pool_release_columns(corpus, Dataset::pubmed, *judge);
  REQUIRE(pooled.rouge_facet.size() >= 2);
  // Both correlations computed over exactly the rows the facet variant covers.
  const double flat_rho = pooled_spearman(pooled.rouge_flat_for_facet, pooled.human_for_facet);
  const double facet_rho = pooled_spearman(pooled.rouge_facet, pooled.human_for_facet);
  CHECK(facet_rho > flat_rho);
  announce(10, facet_rho > flat_rho ? "PASS" : "FAIL",
           "facet-decomposed ROUGE-L rho=" + std::to_string(facet_rho) + " vs flat rho=" +
               std::to_string(flat_rho));
}
