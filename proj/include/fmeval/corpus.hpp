#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fmeval/facet.hpp"
#include "fmeval/meta_eval.hpp"
#include "fmeval/score_vector.hpp"

namespace fmeval {

enum class Dataset { pubmed, arxiv };

std::string_view dataset_name(Dataset dataset);

using SystemJudge = std::pair<std::string, std::string>;

// One corpus entry. The on-disk schema uses flattened keys
// (gpt35_human_list, gpt35_gpt4_fm, ...); the loader normalizes them into
// the per-system / per-judge maps below. Records are immutable after load.
struct PaperRecord {
  std::string id;
  Dataset dataset = Dataset::pubmed;
  std::string article;
  std::string human_summary;
  // system name -> generated abstract
  std::map<std::string, std::string> generated;
  // source name ("human", a system name, ...) -> facet segments
  std::map<std::string, FacetSet> facet_sets;
  // system -> human overall score in [0,1]
  std::map<std::string, double> human_overall;
  // system -> human facet ratings, ordered B,M,R,C; 0 marks an omitted facet
  std::map<std::string, std::array<int, 4>> human_facets;
  // (system, judge) -> model-judged overall / facet ratings
  std::map<SystemJudge, double> fm_overall;
  std::map<SystemJudge, std::array<int, 4>> fm_facets;
  // Unrecognized fields, preserved verbatim for round-tripping.
  nlohmann::json extra = nlohmann::json::object();
};

struct SystemScores {
  ScoreVector scores;
  std::vector<std::string> excluded_ids;  // records lacking the column
};

class Corpus {
 public:
  Corpus() = default;

  const std::vector<PaperRecord>& records() const { return records_; }
  const std::vector<std::string>& systems() const { return systems_; }
  const std::vector<std::string>& judges() const { return judges_; }

  bool has_record(const std::string& id) const;
  const PaperRecord& record(const std::string& id) const;

  // Names of metric columns attached via import_metric_column or the
  // baseline commands.
  std::vector<std::string> metric_columns() const;

  // Every column selector system_scores accepts: "human_overall", "fm:<judge>"
  // per judge, plus the metric columns.
  std::vector<std::string> available_columns() const;

  std::optional<double> metric_value(const std::string& column, const std::string& id,
                                     const std::string& system) const;

  using ColumnMap = std::map<std::string, std::map<std::pair<std::string, std::string>, double>>;
  const ColumnMap& columns() const { return columns_; }

 private:
  friend class CorpusBuilder;
  std::vector<PaperRecord> records_;
  std::vector<std::string> systems_;
  std::vector<std::string> judges_;
  std::map<std::string, size_t> index_;
  // column name -> (record id, system) -> value; system "" = record-level
  std::map<std::string, std::map<std::pair<std::string, std::string>, double>> columns_;
};

// Assembles corpora for the loader and the enrichment paths; enrichment
// never mutates an existing Corpus.
class CorpusBuilder {
 public:
  CorpusBuilder() = default;
  explicit CorpusBuilder(Corpus base);

  void add_record(PaperRecord record);
  void set_facet_set(const std::string& id, const std::string& source, FacetSet facets);
  void set_fm_score(const std::string& id, const std::string& system, const std::string& judge,
                    double overall, const std::array<int, 4>& facets);
  void set_metric_value(const std::string& column, const std::string& id,
                        const std::string& system, double value);
  Corpus build();

 private:
  Corpus corpus_;
};

// Loads a UTF-8 JSON corpus: a file holding a list of entry objects, a file
// holding a single entry object, or a directory of such files (sorted by
// name). Missing optional fields stay absent; unknown fields are preserved
// but ignored.
Corpus load_corpus(const std::filesystem::path& path);

// Parses records from already-loaded JSON. `origin` seeds synthesized ids
// and the dataset guess for records that do not carry id/dataset fields.
Corpus load_corpus_json(const nlohmann::json& doc, const std::string& origin);

// Canonical serialization: flattened keys, sorted, indent 2, trailing
// newline. load_corpus(serialize(c)) == c on the validated field set.
std::string serialize(const Corpus& corpus);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Per-record scores for one system under a column selector, in record
// order; records lacking the column are reported in excluded_ids.
SystemScores system_scores(const Corpus& corpus, const std::string& system,
                           const std::string& column);

// Returns a new corpus with the named column attached. Keys are record ids,
// or "id::system" for per-system values.
Corpus import_metric_column(const Corpus& corpus, const std::string& name,
                            const std::map<std::string, double>& values);

// One observation per (record, system) pair with a generated abstract,
// record-major; the backbone for pooled metric-vs-human correlation.
std::vector<std::pair<std::string, std::string>> observation_grid(
    const Corpus& corpus, const std::vector<std::string>& systems_filter = {});

AlignedColumn observation_column(const Corpus& corpus, const std::string& column,
                                 const std::vector<std::pair<std::string, std::string>>& grid);

struct ValidationReport {
  bool passed = true;
  std::vector<std::string> notes;
};

// Structural checks for the released benchmark (uniform system roster per
// split, 50 records per split, 500 generated abstracts in total). Not
// applied to user corpora.
ValidationReport validate_release(const Corpus& corpus);

}  // namespace fmeval
