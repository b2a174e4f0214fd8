#include "fmeval/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "fmeval/baseline_metrics.hpp"
#include "fmeval/digest.hpp"
#include "fmeval/errors.hpp"
#include "fmeval/facet_extraction.hpp"
#include "fmeval/fm_scoring.hpp"
#include "fmeval/meta_eval.hpp"
#include "fmeval/reporting.hpp"
#include "fmeval/text.hpp"

namespace fmeval {

using nlohmann::json;

namespace {

constexpr std::string_view kVersion = "0.1.0";

std::vector<std::string> selected_systems(const Corpus& corpus, const RunConfig& config) {
  if (config.systems.empty()) return corpus.systems();
  const auto& known = corpus.systems();
  for (const auto& system : config.systems) {
    if (std::find(known.begin(), known.end(), system) == known.end()) {
      throw Error(Errc::config_error, "--systems names unknown system '" + system + "'", system);
    }
  }
  return config.systems;
}

bool record_selected(const RunConfig& config, const PaperRecord& record) {
  if (config.record_ids.empty()) return true;
  return std::find(config.record_ids.begin(), config.record_ids.end(), record.id) !=
         config.record_ids.end();
}

std::string stored_judge(const RunConfig& config) {
  std::string judge = config.resolved_judge();
  if (config.shots == ShotMode::few_shot) judge += "@few";
  return judge;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  for (const auto& line : lines) out << line << "\n";
}

json provenance(const RunConfig& config, const Corpus& corpus) {
  json meta;
  meta["tool"] = "fmeval " + std::string(kVersion);
  meta["config_digest"] = config_digest(config);
  meta["corpus_digest"] = sha256_hex(serialize(corpus));
  meta["prompt_digests"] = prompt_digests();
  return meta;
}

double mean_of(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::config_error, "--alpha must lie in (0,1)");
  }
  if (resamples < 1) throw Error(Errc::config_error, "--resamples must be >= 1");
  weights.validate();
  if (backend.max_parallel < 1) throw Error(Errc::config_error, "max_parallel must be >= 1");
}

std::string config_digest(const RunConfig& config) {
  const json canonical = {
      {"alpha", config.alpha},
      {"base_url", config.backend.base_url},
      {"judge", config.resolved_judge()},
      {"model", config.backend.model},
      {"resamples", config.resamples},
      {"seed", config.seed},
      {"shots", std::string(shot_mode_name(config.shots))},
      {"systems", config.systems},
      {"records", config.record_ids},
      {"weights", config.weights.values},
  };
  return sha256_hex(canonical.dump());
}

CommandOutcome cmd_extract(const RunConfig& config) {
  config.validate();
  const Corpus corpus = load_corpus(config.corpus_path);
  const auto systems = selected_systems(corpus, config);
  LlmClient client(config.backend);

  CorpusBuilder builder(corpus);
  CommandOutcome outcome;
  std::vector<std::string> transcripts;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  int flag_count = 0;
  int target_count = 0;

  auto run_target = [&](const PaperRecord& record, const std::string& source,
                        const std::string& text) {
    ++target_count;
    const std::string tag = "extract:" + record.id + ":" + source;
    json row;
    row["id"] = record.id;
    row["source"] = source;
    row["tag"] = tag;
    try {
      ExtractionOutcome extraction = extract_facets(client, text, tag);
      builder.set_facet_set(record.id, source, extraction.facets);
      json fidelity = json::object();
      json flagged = json::array();
      for (FacetKind kind : kFacetOrder) {
        if (!extraction.facets.has(kind)) continue;
        fidelity[std::string(facet_name(kind))] = extraction.fidelity[static_cast<int>(kind)];
      }
      for (FacetKind kind : extraction.flagged) {
        flagged.push_back(std::string(facet_name(kind)));
        ++flag_count;
      }
      for (const auto& response : extraction.responses) {
        prompt_tokens += response.token_counts.prompt;
        completion_tokens += response.token_counts.completion;
      }
      row["fidelity"] = fidelity;
      row["flagged"] = flagged;
      row["retried"] = extraction.retried;
      row["response"] = extraction.responses.back().text;
      row["prompt_tokens"] = extraction.responses.back().token_counts.prompt;
      row["completion_tokens"] = extraction.responses.back().token_counts.completion;
    } catch (const Error& e) {
      row["error"] = std::string(e.what());
      if (std::find(outcome.failed_ids.begin(), outcome.failed_ids.end(), record.id) ==
          outcome.failed_ids.end()) {
        outcome.failed_ids.push_back(record.id);
      }
    }
    transcripts.push_back(row.dump());
  };

  for (const auto& record : corpus.records()) {
    if (!record_selected(config, record)) continue;
    if (!record.facet_sets.count("human")) {
      run_target(record, "human", record.human_summary);
    }
    for (const auto& system : systems) {
      const auto it = record.generated.find(system);
      if (it == record.generated.end() || is_blank(it->second)) continue;
      run_target(record, system, it->second);
    }
  }

  const Corpus enriched = builder.build();
  save_corpus(enriched, config.out_dir / "corpus.json");
  write_lines(config.out_dir / "extract_transcripts.jsonl", transcripts);

  outcome.summary["targets"] = target_count;
  outcome.summary["near_substring_flags"] = flag_count;
  outcome.summary["failed_ids"] = outcome.failed_ids;
  outcome.summary["prompt_tokens"] = prompt_tokens;
  outcome.summary["completion_tokens"] = completion_tokens;
  outcome.exit_code = outcome.failed_ids.empty() ? 0 : 1;
  std::cerr << "extract: " << target_count << " targets, " << flag_count << " flags, "
            << outcome.failed_ids.size() << " failures\n";
  return outcome;
}

CommandOutcome cmd_score(const RunConfig& config) {
  config.validate();
  const Corpus corpus = load_corpus(config.corpus_path);
  const auto systems = selected_systems(corpus, config);
  const std::string judge = stored_judge(config);
  LlmClient client(config.backend);

  CorpusBuilder builder(corpus);
  CommandOutcome outcome;
  std::vector<std::string> transcripts;
  long prompt_tokens = 0;
  long completion_tokens = 0;
  int pair_count = 0;
  int parse_floor_count = 0;

  for (const auto& record : corpus.records()) {
    if (!record_selected(config, record)) continue;
    const auto ref_it = record.facet_sets.find("human");
    for (const auto& system : systems) {
      if (!record.generated.count(system) && !record.facet_sets.count(system)) continue;
      const std::string tag = "rate:" + record.id + ":" + system;
      json row;
      row["id"] = record.id;
      row["system"] = system;
      row["judge"] = judge;
      try {
        if (ref_it == record.facet_sets.end()) {
          throw Error(Errc::missing_column, "record lacks reference facet set; run extract first",
                      tag);
        }
        const auto gen_it = record.facet_sets.find(system);
        if (gen_it == record.facet_sets.end()) {
          throw Error(Errc::missing_column,
                      "record lacks facet set for system '" + system + "'; run extract first", tag);
        }
        ++pair_count;
        ScorePairOutcome scored = score_pair(client, ref_it->second, gen_it->second, config.weights,
                                             config.shots, judge, tag);
        std::array<int, 4> facet_list{};
        json facets = json::array();
        for (FacetKind kind : kFacetOrder) {
          const auto& rating = scored.score.ratings[static_cast<int>(kind)];
          facet_list[static_cast<int>(kind)] = rating.omitted ? 0 : rating.value;
          facets.push_back({{"facet", std::string(facet_name(kind))},
                            {"omitted", rating.omitted},
                            {"value", rating.omitted ? 0 : rating.value},
                            {"scale", rating.scale},
                            {"parse_failed", rating.parse_failed},
                            {"raw", rating.raw_response}});
        }
        builder.set_fm_score(record.id, system, judge, scored.score.overall, facet_list);
        parse_floor_count += static_cast<int>(scored.parse_failures.size());
        long pair_prompt = 0;
        long pair_completion = 0;
        for (const auto& response : scored.responses) {
          pair_prompt += response.token_counts.prompt;
          pair_completion += response.token_counts.completion;
        }
        prompt_tokens += pair_prompt;
        completion_tokens += pair_completion;
        row["prompt_tokens"] = pair_prompt;
        row["completion_tokens"] = pair_completion;
        row["overall"] = scored.score.overall;
        row["ratings"] = facets;
        row["retried"] = scored.retried;
        row["parse_floors"] = static_cast<int>(scored.parse_failures.size());
      } catch (const Error& e) {
        row["error"] = std::string(e.what());
        if (std::find(outcome.failed_ids.begin(), outcome.failed_ids.end(), record.id) ==
            outcome.failed_ids.end()) {
          outcome.failed_ids.push_back(record.id);
        }
      }
      transcripts.push_back(row.dump());
    }
  }

  const Corpus enriched = builder.build();
  save_corpus(enriched, config.out_dir / "corpus.json");
  write_lines(config.out_dir / "score_transcripts.jsonl", transcripts);

  outcome.summary["pairs"] = pair_count;
  outcome.summary["judge"] = judge;
  outcome.summary["parse_floors"] = parse_floor_count;
  outcome.summary["failed_ids"] = outcome.failed_ids;
  outcome.summary["prompt_tokens"] = prompt_tokens;
  outcome.summary["completion_tokens"] = completion_tokens;
  outcome.exit_code = outcome.failed_ids.empty() ? 0 : 1;
  std::cerr << "score: " << pair_count << " pairs as fm:" << judge << ", " << parse_floor_count
            << " parse floors, " << outcome.failed_ids.size() << " failures\n";
  return outcome;
}

CommandOutcome cmd_baseline(const RunConfig& config) {
  config.validate();
  const Corpus corpus = load_corpus(config.corpus_path);
  const auto systems = selected_systems(corpus, config);

  CorpusBuilder builder(corpus);
  int flat_count = 0;
  int facet_count = 0;
  for (const auto& record : corpus.records()) {
    if (!record_selected(config, record)) continue;
    const auto ref_facets = record.facet_sets.find("human");
    for (const auto& system : systems) {
      const auto gen = record.generated.find(system);
      if (gen == record.generated.end()) continue;
      for (RougeVariant variant :
           {RougeVariant::rouge1, RougeVariant::rouge2, RougeVariant::rougeL}) {
        const std::string name(rouge_variant_name(variant));
        const RougeScore flat = rouge(record.human_summary, gen->second, variant);
        builder.set_metric_value(name, record.id, system, flat.f1);
        ++flat_count;
        const auto gen_facets = record.facet_sets.find(system);
        if (ref_facets != record.facet_sets.end() && gen_facets != record.facet_sets.end() &&
            ref_facets->second.present_count() > 0) {
          const FacetMetricScore decomposed =
              facet_metric(ref_facets->second, gen_facets->second, config.weights, variant);
          if (decomposed.overall) {
            builder.set_metric_value(name + "_facet", record.id, system, *decomposed.overall);
            ++facet_count;
          }
        }
      }
    }
  }

  const Corpus enriched = builder.build();
  save_corpus(enriched, config.out_dir / "corpus.json");

  CommandOutcome outcome;
  outcome.summary["flat_scores"] = flat_count;
  outcome.summary["facet_scores"] = facet_count;
  std::cerr << "baseline: " << flat_count << " flat, " << facet_count << " facet-decomposed\n";
  return outcome;
}

namespace {

struct MetaContext {
  const Corpus& corpus;
  const RunConfig& config;
  std::vector<std::string> systems;
  std::vector<std::string> columns;  // selectors with at least one value
  std::vector<std::pair<std::string, std::string>> grid;
  json meta;
};

Report build_system_table(const MetaContext& ctx) {
  Report report;
  report.kind = ReportKind::system_table;
  report.metadata = ctx.meta;
  report.columns = {"system"};
  for (const auto& column : ctx.columns) report.columns.push_back(column);
  for (const auto& system : ctx.systems) {
    std::vector<json> row;
    row.emplace_back(system);
    for (const auto& column : ctx.columns) {
      const SystemScores scores = system_scores(ctx.corpus, system, column);
      if (scores.scores.values.empty()) {
        row.emplace_back(nullptr);
      } else {
        row.emplace_back(mean_of(scores.scores.values));
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

Report build_correlation_matrix(const MetaContext& ctx) {
  std::vector<AlignedColumn> aligned;
  for (const auto& column : ctx.columns) {
    aligned.push_back(observation_column(ctx.corpus, column, ctx.grid));
  }
  const CorrelationMatrix matrix = correlation_matrix(aligned, CorrelationMethod::spearman);
  Report report;
  report.kind = ReportKind::correlation_matrix;
  report.metadata = ctx.meta;
  report.metadata["method"] = "spearman";
  report.metadata["observations"] = "pooled (record, system) pairs, pairwise-complete";
  report.columns = {"metric_a", "metric_b", "rho", "n"};
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    for (std::size_t j = 0; j < matrix.labels.size(); ++j) {
      const MatrixCell& cell = matrix.cells[i][j];
      std::vector<json> row;
      row.emplace_back(matrix.labels[i]);
      row.emplace_back(matrix.labels[j]);
      row.emplace_back(cell.rho ? json(*cell.rho) : json(nullptr));
      row.emplace_back(cell.n);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

Report build_power_table(const MetaContext& ctx) {
  Report report;
  report.kind = ReportKind::power_table;
  report.metadata = ctx.meta;
  report.metadata["protocol"] =
      "per system pair: paired two-sided t-test on per-record differences in each bootstrap "
      "resample; pairs restricted to those whose human_overall means differ significantly when "
      "human_overall is available";
  report.metadata["alpha"] = ctx.config.alpha;
  report.metadata["resamples"] = ctx.config.resamples;
  report.metadata["seed"] = ctx.config.seed;
  report.columns = {"metric", "pairs", "avg_power"};

  const bool have_human =
      std::find(ctx.columns.begin(), ctx.columns.end(), "human_overall") != ctx.columns.end();

  // System pairs whose human means differ significantly on shared records.
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < ctx.systems.size(); ++i) {
    for (std::size_t j = i + 1; j < ctx.systems.size(); ++j) {
      const auto& a = ctx.systems[i];
      const auto& b = ctx.systems[j];
      if (!have_human) {
        pairs.emplace_back(a, b);
        continue;
      }
      ScoreVector xs;
      ScoreVector ys;
      for (const auto& record : ctx.corpus.records()) {
        const auto ita = record.human_overall.find(a);
        const auto itb = record.human_overall.find(b);
        if (ita != record.human_overall.end() && itb != record.human_overall.end()) {
          xs.values.push_back(ita->second);
          ys.values.push_back(itb->second);
        }
      }
      if (xs.values.size() < 2) continue;
      double mean = 0.0;
      double var = 0.0;
      const std::size_t n = xs.values.size();
      for (std::size_t k = 0; k < n; ++k) mean += xs.values[k] - ys.values[k];
      mean /= static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double d = xs.values[k] - ys.values[k] - mean;
        var += d * d;
      }
      var /= static_cast<double>(n - 1);
      bool significant;
      if (var == 0.0) {
        significant = (mean != 0.0);
      } else {
        const double t = mean / std::sqrt(var / static_cast<double>(n));
        significant = student_t_two_sided_p(t, static_cast<int>(n) - 1) < ctx.config.alpha;
      }
      if (significant) pairs.emplace_back(a, b);
    }
  }
  report.metadata["system_pairs"] = json::array();
  for (const auto& [a, b] : pairs) report.metadata["system_pairs"].push_back(a + " vs " + b);

  // Per-system aligned record columns, built once per metric.
  std::vector<std::pair<std::string, std::string>> record_grid;
  for (const auto& record : ctx.corpus.records()) record_grid.emplace_back(record.id, "");
  auto system_column = [&](const std::string& column, const std::string& system) {
    auto grid = record_grid;
    for (auto& cell : grid) cell.second = system;
    return observation_column(ctx.corpus, column, grid);
  };

  for (const auto& column : ctx.columns) {
    std::vector<double> powers;
    std::map<std::string, AlignedColumn> per_system;
    for (const auto& system : ctx.systems) per_system[system] = system_column(column, system);
    for (const auto& [a, b] : pairs) {
      ScoreVector xs;
      ScoreVector ys;
      xs.label = column;
      const AlignedColumn& ca = per_system[a];
      const AlignedColumn& cb = per_system[b];
      for (std::size_t r = 0; r < ca.values.size(); ++r) {
        if (ca.values[r] && cb.values[r]) {
          xs.values.push_back(*ca.values[r]);
          ys.values.push_back(*cb.values[r]);
        }
      }
      if (xs.values.empty()) continue;
      const PowerResult result =
          power_analysis(xs, ys, ctx.config.resamples, ctx.config.alpha, ctx.config.seed);
      powers.push_back(result.power);
    }
    std::vector<json> row;
    row.emplace_back(column);
    row.emplace_back(static_cast<int>(powers.size()));
    row.emplace_back(powers.empty() ? json(nullptr) : json(mean_of(powers)));
    report.rows.push_back(std::move(row));
  }
  return report;
}

Report build_facet_breakdown(const MetaContext& ctx) {
  Report report;
  report.kind = ReportKind::facet_breakdown;
  report.metadata = ctx.meta;
  report.metadata["note"] = "mean of value/scale over non-omitted facet ratings";
  report.columns = {"judge", "system", "facet", "mean_normalized", "n"};
  for (const auto& judge : ctx.corpus.judges()) {
    for (const auto& system : ctx.systems) {
      for (FacetKind kind : kFacetOrder) {
        const int slot = static_cast<int>(kind);
        std::vector<double> values;
        for (const auto& record : ctx.corpus.records()) {
          const std::array<int, 4>* list = nullptr;
          if (judge == "human") {
            const auto it = record.human_facets.find(system);
            if (it != record.human_facets.end()) list = &it->second;
          } else {
            const auto it = record.fm_facets.find({system, judge});
            if (it != record.fm_facets.end()) list = &it->second;
          }
          if (!list || (*list)[slot] == 0) continue;  // 0 = omitted facet
          values.push_back(static_cast<double>((*list)[slot]) / facet_scale(kind));
        }
        if (values.empty()) continue;
        report.rows.push_back({json(judge), json(system), json(std::string(facet_name(kind))),
                               json(mean_of(values)), json(static_cast<int>(values.size()))});
      }
    }
  }
  return report;
}

Report build_weight_fit(const MetaContext& ctx, CommandOutcome& outcome) {
  Report report;
  report.kind = ReportKind::weight_fit;
  report.metadata = ctx.meta;
  report.metadata["note"] =
      "OLS without intercept of human_overall on normalized human facet ratings; rows with an "
      "omitted facet (0) are excluded";
  report.columns = {"coefficient", "background", "method", "result", "conclusion", "mse", "n"};

  std::vector<std::array<double, 4>> x;
  ScoreVector y;
  for (const auto& record : ctx.corpus.records()) {
    for (const auto& system : ctx.systems) {
      const auto facets = record.human_facets.find(system);
      const auto overall = record.human_overall.find(system);
      if (facets == record.human_facets.end() || overall == record.human_overall.end()) continue;
      bool complete = true;
      std::array<double, 4> row{};
      for (int k = 0; k < 4; ++k) {
        if (facets->second[k] == 0) {
          complete = false;
          break;
        }
        row[k] = static_cast<double>(facets->second[k]) / facet_scale(static_cast<FacetKind>(k));
      }
      if (!complete) continue;
      x.push_back(row);
      y.values.push_back(overall->second);
    }
  }
  report.metadata["rows_used"] = static_cast<int>(x.size());
  if (x.size() < 4) {
    report.metadata["skipped"] = "fewer than 4 complete (facet, overall) rows";
    outcome.summary["weight_fit"] = "skipped";
    return report;
  }
  const WeightFit fit = fit_weights(x, y);
  report.rows.push_back({json("raw"), json(fit.raw[0]), json(fit.raw[1]), json(fit.raw[2]),
                         json(fit.raw[3]), json(fit.mse), json(fit.n)});
  report.rows.push_back({json("normalized"), json(fit.weights.values[0]),
                         json(fit.weights.values[1]), json(fit.weights.values[2]),
                         json(fit.weights.values[3]), json(fit.mse), json(fit.n)});
  outcome.summary["weight_fit"] = {{"normalized", fit.weights.values}, {"mse", fit.mse}};
  return report;
}

Report build_agreement_table(const MetaContext& ctx, CommandOutcome& outcome) {
  Report report;
  report.kind = ReportKind::agreement_table;
  report.metadata = ctx.meta;
  report.columns = {"facet", "classes", "agreement", "kappa", "n"};

  std::string judge_a;
  std::string judge_b;
  if (!ctx.config.agreement_judges.empty()) {
    const auto parts = split(ctx.config.agreement_judges, ',');
    if (parts.size() != 2) {
      throw Error(Errc::config_error, "--agreement-judges expects 'judgeA,judgeB'");
    }
    judge_a = parts[0];
    judge_b = parts[1];
  } else {
    // Auto-detect per-annotator label columns.
    const auto& judges = ctx.corpus.judges();
    auto has = [&](const char* name) {
      return std::find(judges.begin(), judges.end(), name) != judges.end();
    };
    if (has("annot1") && has("annot2")) {
      judge_a = "annot1";
      judge_b = "annot2";
    } else if (has("human1") && has("human2")) {
      judge_a = "human1";
      judge_b = "human2";
    } else {
      report.metadata["skipped"] = "no per-annotator label columns found";
      outcome.summary["agreement"] = "skipped";
      return report;
    }
  }
  report.metadata["judges"] = {judge_a, judge_b};

  for (FacetKind kind : kFacetOrder) {
    const int slot = static_cast<int>(kind);
    std::vector<int> a;
    std::vector<int> b;
    for (const auto& record : ctx.corpus.records()) {
      for (const auto& system : ctx.systems) {
        const auto ita = record.fm_facets.find({system, judge_a});
        const auto itb = record.fm_facets.find({system, judge_b});
        if (ita == record.fm_facets.end() || itb == record.fm_facets.end()) continue;
        if (ita->second[slot] == 0 || itb->second[slot] == 0) continue;
        a.push_back(ita->second[slot]);
        b.push_back(itb->second[slot]);
      }
    }
    if (a.empty()) continue;
    try {
      const AgreementResult result = cohens_kappa(a, b, facet_scale(kind));
      report.rows.push_back({json(std::string(facet_name(kind))), json(result.classes),
                             json(result.observed_agreement), json(result.kappa), json(result.n)});
    } catch (const Error&) {
      report.rows.push_back({json(std::string(facet_name(kind))), json(facet_scale(kind)),
                             json(nullptr), json(nullptr), json(static_cast<int>(a.size()))});
    }
  }
  return report;
}

Report build_run_audit(const MetaContext& ctx) {
  Report report;
  report.kind = ReportKind::run_audit;
  report.metadata = ctx.meta;
  report.metadata["baseline"] =
      "estimated tokens of every reference and generated abstract read once";
  report.columns = {"source", "prompt_tokens", "completion_tokens", "calls"};

  long total_tokens = 0;
  std::set<std::pair<std::string, std::string>> scored_pairs;
  bool any_transcripts = false;
  for (const char* name : {"extract_transcripts.jsonl", "score_transcripts.jsonl"}) {
    const auto path = ctx.config.out_dir / name;
    std::ifstream in(path);
    if (!in) continue;
    any_transcripts = true;
    long prompt_total = 0;
    long completion_total = 0;
    long calls = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json row = json::parse(line, nullptr, false);
      if (!row.is_object()) continue;
      prompt_total += row.value("prompt_tokens", 0L);
      completion_total += row.value("completion_tokens", 0L);
      ++calls;
      if (row.contains("system") && row.contains("id")) {
        scored_pairs.emplace(row["id"].get<std::string>(), row["system"].get<std::string>());
      }
    }
    total_tokens += prompt_total + completion_total;
    report.rows.push_back(
        {json(std::string(name)), json(prompt_total), json(completion_total), json(calls)});
  }
  if (!any_transcripts) {
    report.metadata["skipped"] = "no transcripts found under the output directory";
    return report;
  }

  long baseline = 0;
  std::set<std::string> reference_ids;
  for (const auto& [id, system] : scored_pairs) {
    if (!ctx.corpus.has_record(id)) continue;
    const auto& record = ctx.corpus.record(id);
    reference_ids.insert(id);
    const auto it = record.generated.find(system);
    if (it != record.generated.end()) baseline += estimate_tokens(it->second);
  }
  for (const auto& id : reference_ids) {
    baseline += estimate_tokens(ctx.corpus.record(id).human_summary);
  }
  report.metadata["pipeline_tokens"] = total_tokens;
  report.metadata["baseline_tokens"] = baseline;
  if (baseline > 0) {
    CompletionResponse synthetic;
    synthetic.token_counts.prompt = total_tokens;
    synthetic.token_counts.completion = 0;
    report.metadata["token_overhead"] = token_overhead({synthetic}, baseline);
  }
  return report;
}

}  // namespace

CommandOutcome cmd_meta(const RunConfig& config) {
  config.validate();
  const Corpus corpus = load_corpus(config.corpus_path);

  MetaContext ctx{corpus, config, {}, {}, {}, {}};
  ctx.systems = selected_systems(corpus, config);
  ctx.grid = observation_grid(corpus, ctx.systems);
  ctx.meta = provenance(config, corpus);
  ctx.meta["seed"] = config.seed;

  // Keep only columns with at least one observation.
  for (const auto& column : corpus.available_columns()) {
    const AlignedColumn aligned = observation_column(corpus, column, ctx.grid);
    const bool any = std::any_of(aligned.values.begin(), aligned.values.end(),
                                 [](const auto& v) { return v.has_value(); });
    if (any) ctx.columns.push_back(column);
  }
  if (ctx.columns.empty()) {
    throw Error(Errc::missing_column, "corpus has no score columns (human_overall, fm:*, metrics)",
                "human_overall");
  }

  CommandOutcome outcome;
  std::vector<Report> reports;
  reports.push_back(build_system_table(ctx));
  reports.push_back(build_correlation_matrix(ctx));
  reports.push_back(build_power_table(ctx));
  reports.push_back(build_facet_breakdown(ctx));
  reports.push_back(build_weight_fit(ctx, outcome));
  reports.push_back(build_agreement_table(ctx, outcome));
  reports.push_back(build_run_audit(ctx));
  for (const auto& report : reports) write_report(report, config.out_dir);

  outcome.summary["columns"] = ctx.columns;
  outcome.summary["systems"] = ctx.systems;
  outcome.summary["reports"] = static_cast<int>(reports.size());
  std::cerr << "meta: " << reports.size() << " reports over " << ctx.columns.size()
            << " columns\n";
  return outcome;
}

CommandOutcome cmd_fit_weights(const RunConfig& config) {
  config.validate();
  const Corpus corpus = load_corpus(config.corpus_path);
  MetaContext ctx{corpus, config, {}, {}, {}, {}};
  ctx.systems = selected_systems(corpus, config);
  ctx.grid = observation_grid(corpus, ctx.systems);
  ctx.meta = provenance(config, corpus);

  CommandOutcome outcome;
  const Report report = build_weight_fit(ctx, outcome);
  write_report(report, config.out_dir);
  if (report.rows.empty()) {
    throw Error(Errc::missing_column,
                "not enough complete human facet + overall rows to fit weights", "human_facets");
  }
  return outcome;
}

CommandOutcome cmd_validate(const RunConfig& config, bool release_checks) {
  const Corpus corpus = load_corpus(config.corpus_path);
  CommandOutcome outcome;
  outcome.summary["records"] = static_cast<int>(corpus.records().size());
  outcome.summary["systems"] = corpus.systems();
  outcome.summary["judges"] = corpus.judges();
  outcome.summary["metric_columns"] = corpus.metric_columns();
  if (release_checks) {
    const ValidationReport report = validate_release(corpus);
    outcome.summary["release_notes"] = report.notes;
    outcome.summary["release_passed"] = report.passed;
    outcome.exit_code = report.passed ? 0 : 1;
  }
  return outcome;
}

}  // namespace fmeval
