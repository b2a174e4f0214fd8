// fmeval: facet-aware evaluation of scholarly abstract summaries.
//
// Subcommands: extract | score | baseline | meta | fit-weights | validate.
// Exit codes: 0 clean, 1 partial failures, 2 configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "fmeval/errors.hpp"
#include "fmeval/pipeline.hpp"
#include "fmeval/text.hpp"

namespace {

using fmeval::RunConfig;

void add_common_flags(CLI::App* cmd, RunConfig& config, std::string& weights_csv,
                      std::string& systems_csv, std::string& records_csv, std::string& shots) {
  cmd->add_option("--corpus", config.corpus_path, "Corpus JSON file or directory")->required();
  cmd->add_option("--out", config.out_dir, "Output directory");
  cmd->add_option("--backend-url", config.backend.base_url,
                  "Chat-completion endpoint (http(s)://...) or mock://rules");
  cmd->add_option("--model", config.backend.model, "Model name sent to the endpoint");
  cmd->add_option("--judge", config.judge, "Label for stored FM columns (default: model)");
  cmd->add_option("--shots", shots, "Prompting mode: zero or few")
      ->check(CLI::IsMember({"zero", "few"}));
  cmd->add_option("--weights", weights_csv, "Facet weights b,m,r,c (default 0.1,0.3,0.3,0.3)");
  cmd->add_option("--cache-dir", config.backend.cache_dir, "Response cache directory");
  cmd->add_flag("--replay-only", config.backend.replay_only,
                "Serve everything from the cache; never touch the network");
  cmd->add_option("--systems", systems_csv, "Comma-separated system filter");
  cmd->add_option("--records", records_csv, "Comma-separated record id filter");
  cmd->add_option("--auth-env", config.backend.auth_env_var,
                  "Environment variable holding the API token");
  cmd->add_option("--max-parallel", config.backend.max_parallel, "Max in-flight requests");
  cmd->add_option("--max-retries", config.backend.max_retries, "Transport retries");
}

void finalize(RunConfig& config, const std::string& weights_csv, const std::string& systems_csv,
              const std::string& records_csv, const std::string& shots) {
  if (shots == "few") config.shots = fmeval::ShotMode::few_shot;
  if (!weights_csv.empty()) {
    const auto parts = fmeval::split(weights_csv, ',');
    if (parts.size() != 4) {
      throw fmeval::Error(fmeval::Errc::config_error, "--weights expects 4 values b,m,r,c");
    }
    for (int i = 0; i < 4; ++i) {
      try {
        config.weights.values[i] = std::stod(parts[i]);
      } catch (const std::exception&) {
        throw fmeval::Error(fmeval::Errc::config_error, "--weights entry not a number: " + parts[i]);
      }
    }
  }
  if (!systems_csv.empty()) config.systems = fmeval::split(systems_csv, ',');
  if (!records_csv.empty()) config.record_ids = fmeval::split(records_csv, ',');
}

int report_outcome(const fmeval::CommandOutcome& outcome) {
  std::cout << outcome.summary.dump(2) << std::endl;
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facet-aware evaluation and meta-evaluation for scholarly abstract summaries"};
  app.require_subcommand(1);

  RunConfig config;
  std::string weights_csv;
  std::string systems_csv;
  std::string records_csv;
  std::string shots = "zero";
  bool release_checks = false;

  auto* extract = app.add_subcommand("extract", "Attach facet sets to every selected abstract");
  add_common_flags(extract, config, weights_csv, systems_csv, records_csv, shots);

  auto* score = app.add_subcommand("score", "Judge (reference, generated) facet pairs");
  add_common_flags(score, config, weights_csv, systems_csv, records_csv, shots);

  auto* baseline = app.add_subcommand("baseline", "Compute ROUGE and facet-decomposed variants");
  add_common_flags(baseline, config, weights_csv, systems_csv, records_csv, shots);

  auto* meta = app.add_subcommand("meta", "Correlations, power, agreement, weight-fit reports");
  add_common_flags(meta, config, weights_csv, systems_csv, records_csv, shots);
  meta->add_option("--seed", config.seed, "PRNG seed for bootstrap/power (required)")->required();
  meta->add_option("--resamples", config.resamples, "Bootstrap resamples");
  meta->add_option("--alpha", config.alpha, "Significance level");
  meta->add_option("--agreement-judges", config.agreement_judges,
                   "Two judge columns to compare, e.g. annot1,annot2");

  auto* fit = app.add_subcommand("fit-weights", "Fit facet weights to human overall scores");
  add_common_flags(fit, config, weights_csv, systems_csv, records_csv, shots);

  auto* validate = app.add_subcommand("validate", "Schema-validate a corpus");
  add_common_flags(validate, config, weights_csv, systems_csv, records_csv, shots);
  validate->add_flag("--release", release_checks, "Also check released-benchmark structure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // CLI11's own codes, folded into "config error"
  }

  try {
    finalize(config, weights_csv, systems_csv, records_csv, shots);
    if (extract->parsed()) return report_outcome(fmeval::cmd_extract(config));
    if (score->parsed()) return report_outcome(fmeval::cmd_score(config));
    if (baseline->parsed()) return report_outcome(fmeval::cmd_baseline(config));
    if (meta->parsed()) return report_outcome(fmeval::cmd_meta(config));
    if (fit->parsed()) return report_outcome(fmeval::cmd_fit_weights(config));
    if (validate->parsed()) return report_outcome(fmeval::cmd_validate(config, release_checks));
  } catch (const fmeval::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}
