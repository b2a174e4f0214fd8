#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fmeval/corpus.hpp"
#include "fmeval/llm_backend.hpp"
#include "fmeval/prompts.hpp"
#include "fmeval/weights.hpp"

namespace fmeval {

struct RunConfig {
  std::filesystem::path corpus_path;
  BackendConfig backend;
  std::string judge;  // column label for stored scores; empty -> backend model
  ShotMode shots = ShotMode::zero_shot;
  WeightVector weights = WeightVector::defaults();
  std::uint64_t seed = 0;
  int resamples = 1000;
  double alpha = 0.05;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> systems;     // empty = all systems
  std::vector<std::string> record_ids;  // empty = all records
  std::string agreement_judges;         // "judgeA,judgeB"; empty = auto-detect

  std::string resolved_judge() const { return judge.empty() ? backend.model : judge; }

  // Throws Error(config_error) for out-of-range knobs.
  void validate() const;
};

// Digest over the semantic configuration only (never paths), so identical
// runs in different directories produce identical provenance.
std::string config_digest(const RunConfig& config);

struct CommandOutcome {
  int exit_code = 0;  // 0 clean, 1 partial failures
  std::vector<std::string> failed_ids;
  nlohmann::json summary = nlohmann::json::object();
};

// extract: attach facet sets for the reference (when not already annotated)
// and every selected system's abstract; writes <out>/corpus.json and
// <out>/extract_transcripts.jsonl.
CommandOutcome cmd_extract(const RunConfig& config);

// score: rate every (reference, system) facet pair and store FM columns
// keyed (system, judge[@few]); writes <out>/corpus.json and
// <out>/score_transcripts.jsonl.
CommandOutcome cmd_score(const RunConfig& config);

// baseline: rouge1/rouge2/rougeL columns plus facet-decomposed variants
// (<variant>_facet) when facet sets are present.
CommandOutcome cmd_baseline(const RunConfig& config);

// meta: emits the report set (system_table, correlation_matrix, power_table,
// facet_breakdown, weight_fit, agreement_table when annotator columns exist,
// run_audit) as CSV + JSON + Markdown under <out>.
CommandOutcome cmd_meta(const RunConfig& config);

// fit-weights: just the weight_fit report.
CommandOutcome cmd_fit_weights(const RunConfig& config);

// validate: schema validation via the loader; with release_checks also the
// released-benchmark structure (50 records per split, 500 generated).
CommandOutcome cmd_validate(const RunConfig& config, bool release_checks);

}  // namespace fmeval
