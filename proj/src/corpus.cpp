#include "fmeval/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fmeval/errors.hpp"
#include "fmeval/text.hpp"

namespace fmeval {

using nlohmann::json;

namespace {

constexpr std::string_view kAspectSuffix = "_aspect";
constexpr std::string_view kHumanListSuffix = "_human_list";
constexpr std::string_view kFmListSuffix = "_fm_list";
constexpr std::string_view kFmSuffix = "_fm";
constexpr std::string_view kHumanSuffix = "_human";

bool is_reserved_key(std::string_view key) {
  return key == "human" || key == "article" || key == "id" || key == "dataset";
}

std::string strip_suffix(std::string_view key, std::string_view suffix) {
  return std::string(key.substr(0, key.size() - suffix.size()));
}

std::string record_label(const std::string& id, std::size_t index) {
  return "record " + std::to_string(index) + " (" + id + ")";
}

// Splits "<system>_<judge>" preferring the longest known system name; falls
// back to the last underscore, which covers single-token judge names like
// the released gpt35_gpt4_fm keys.
SystemJudge split_system_judge(const std::string& base, const std::set<std::string>& systems,
                               const std::string& where) {
  const std::string* best = nullptr;
  for (const auto& system : systems) {
    if (base.size() > system.size() + 1 && base.compare(0, system.size(), system) == 0 &&
        base[system.size()] == '_') {
      if (!best || system.size() > best->size()) best = &system;
    }
  }
  if (best) return {*best, base.substr(best->size() + 1)};
  const auto pos = base.rfind('_');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= base.size()) {
    throw Error(Errc::schema_error, "cannot split system/judge in key '" + base + "' at " + where);
  }
  return {base.substr(0, pos), base.substr(pos + 1)};
}

double parse_overall(const json& value, const std::string& field, const std::string& where) {
  if (!value.is_number()) {
    throw Error(Errc::schema_error, "field " + field + " must be a number at " + where, field);
  }
  const double score = value.get<double>();
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(Errc::range_error,
                "field " + field + " = " + value.dump() + " outside [0,1] at " + where, field);
  }
  return score;
}

std::array<int, 4> parse_facet_list(const json& value, const std::string& field,
                                    const std::string& where) {
  if (!value.is_array() || value.size() != 4) {
    throw Error(Errc::schema_error,
                "field " + field + " must be a list of 4 facet ratings at " + where, field);
  }
  std::array<int, 4> out{};
  for (int i = 0; i < 4; ++i) {
    if (!value[i].is_number_integer()) {
      throw Error(Errc::schema_error, "field " + field + " entry " + std::to_string(i) +
                                          " must be an integer at " + where,
                  field);
    }
    const int rating = value[i].get<int>();
    const int scale = facet_scale(static_cast<FacetKind>(i));
    // 0 is the "facet absent" sentinel.
    if (rating < 0 || rating > scale) {
      throw Error(Errc::range_error, "field " + field + " entry " + std::to_string(i) + " = " +
                                         std::to_string(rating) + " outside [0," +
                                         std::to_string(scale) + "] at " + where,
                  field);
    }
    out[i] = rating;
  }
  return out;
}

FacetSet parse_aspect(const json& value, const std::string& source, const std::string& field,
                      const std::string& where) {
  FacetSet facets;
  facets.source = (source == "human") ? FacetSource::human_annotation : FacetSource::llm_extraction;
  for (const auto& [key, entry] : value.items()) {
    if (key == "_source") {
      if (entry.is_string() && entry.get<std::string>() == "human_annotation") {
        facets.source = FacetSource::human_annotation;
      } else if (entry.is_string() && entry.get<std::string>() == "llm_extraction") {
        facets.source = FacetSource::llm_extraction;
      }
      continue;
    }
    const auto kind = facet_from_name(key);
    if (!kind) continue;  // extraneous keys ignored
    if (entry.is_null()) continue;
    if (!entry.is_string()) {
      throw Error(Errc::schema_error,
                  "field " + field + "." + key + " must be a string at " + where, field);
    }
    const auto text = entry.get<std::string>();
    if (!is_blank(text)) facets.set(*kind, text);
  }
  return facets;
}

Dataset parse_dataset(const json& value, const std::string& where) {
  if (!value.is_string()) {
    throw Error(Errc::schema_error, "field dataset must be a string at " + where, "dataset");
  }
  const std::string name = lower_ascii(value.get<std::string>());
  if (name == "pubmed") return Dataset::pubmed;
  if (name == "arxiv") return Dataset::arxiv;
  throw Error(Errc::schema_error, "field dataset must be pubmed or arxiv at " + where, "dataset");
}

Dataset dataset_from_origin(const std::string& origin) {
  return lower_ascii(origin).find("arxiv") != std::string::npos ? Dataset::arxiv : Dataset::pubmed;
}

// Candidate system names discovered across the whole document; needed before
// compound keys like llama2_70b_gpt4_fm can be split reliably.
std::set<std::string> discover_systems(const std::vector<const json*>& raw_records) {
  std::set<std::string> systems;
  for (const json* raw : raw_records) {
    for (const auto& [key, value] : raw->items()) {
      if (is_reserved_key(key)) continue;
      if (key.ends_with(kAspectSuffix) && value.is_object()) continue;
      if (key.ends_with(kHumanListSuffix) && value.is_array()) {
        systems.insert(strip_suffix(key, kHumanListSuffix));
      } else if (key.ends_with(kFmListSuffix) && value.is_array()) {
        const std::string base = strip_suffix(key, kFmListSuffix);
        const auto pos = base.rfind('_');
        if (pos != std::string::npos && pos > 0) systems.insert(base.substr(0, pos));
      } else if (key.ends_with(kFmSuffix) && value.is_number()) {
        const std::string base = strip_suffix(key, kFmSuffix);
        const auto pos = base.rfind('_');
        if (pos != std::string::npos && pos > 0) systems.insert(base.substr(0, pos));
      } else if (key.ends_with(kHumanSuffix) && value.is_number()) {
        systems.insert(strip_suffix(key, kHumanSuffix));
      } else if (value.is_string()) {
        systems.insert(key);
      }
    }
  }
  return systems;
}

struct ColumnEntry {
  std::string name;
  std::string system;  // "" = record-level
  double value;
};

PaperRecord parse_record(const json& raw, const std::string& fallback_id, Dataset fallback_dataset,
                         const std::set<std::string>& systems, std::size_t index,
                         std::vector<ColumnEntry>* columns) {
  if (!raw.is_object()) {
    throw Error(Errc::schema_error, "corpus entry " + std::to_string(index) + " is not an object");
  }
  PaperRecord record;
  record.id = fallback_id;
  if (raw.contains("id")) {
    record.id = raw["id"].is_string() ? raw["id"].get<std::string>() : raw["id"].dump();
  }
  const std::string where = record_label(record.id, index);
  record.dataset = raw.contains("dataset") ? parse_dataset(raw["dataset"], where) : fallback_dataset;

  if (!raw.contains("article") || !raw["article"].is_string()) {
    throw Error(Errc::schema_error, "missing required field article at " + where, "article");
  }
  if (!raw.contains("human") || !raw["human"].is_string()) {
    throw Error(Errc::schema_error, "missing required field human at " + where, "human");
  }
  record.article = raw["article"].get<std::string>();
  record.human_summary = raw["human"].get<std::string>();
  if (is_blank(record.article)) {
    throw Error(Errc::schema_error, "field article must be non-empty at " + where, "article");
  }
  if (is_blank(record.human_summary)) {
    throw Error(Errc::schema_error, "field human must be non-empty at " + where, "human");
  }

  for (const auto& [key, value] : raw.items()) {
    if (is_reserved_key(key)) continue;
    if (key.ends_with(kAspectSuffix) && value.is_object()) {
      const std::string source = strip_suffix(key, kAspectSuffix);
      record.facet_sets[source] = parse_aspect(value, source, key, where);
    } else if (key.ends_with(kHumanListSuffix) && value.is_array()) {
      record.human_facets[strip_suffix(key, kHumanListSuffix)] =
          parse_facet_list(value, key, where);
    } else if (key.ends_with(kFmListSuffix) && value.is_array()) {
      const auto [system, judge] =
          split_system_judge(strip_suffix(key, kFmListSuffix), systems, where);
      record.fm_facets[{system, judge}] = parse_facet_list(value, key, where);
    } else if (key.ends_with(kFmSuffix) && value.is_number()) {
      const auto [system, judge] = split_system_judge(strip_suffix(key, kFmSuffix), systems, where);
      record.fm_overall[{system, judge}] = parse_overall(value, key, where);
    } else if (key.ends_with(kHumanSuffix) && value.is_number()) {
      record.human_overall[strip_suffix(key, kHumanSuffix)] = parse_overall(value, key, where);
    } else if (value.is_string()) {
      record.generated[key] = value.get<std::string>();
    } else if (value.is_number()) {
      // A bare numeric key is a metric column, per-system when it starts
      // with a known system name.
      ColumnEntry entry{key, "", value.get<double>()};
      const std::string* best = nullptr;
      for (const auto& system : systems) {
        if (key.size() > system.size() + 1 && key.compare(0, system.size(), system) == 0 &&
            key[system.size()] == '_') {
          if (!best || system.size() > best->size()) best = &system;
        }
      }
      if (best) {
        entry.system = *best;
        entry.name = key.substr(best->size() + 1);
      }
      columns->push_back(std::move(entry));
    } else {
      record.extra[key] = value;
    }
  }
  return record;
}

std::string format_id(const std::string& stem, std::size_t index, bool multi) {
  if (!multi) return stem;
  std::ostringstream out;
  out << stem << "#" << index;
  return out.str();
}

}  // namespace

std::string_view dataset_name(Dataset dataset) {
  return dataset == Dataset::pubmed ? "pubmed" : "arxiv";
}

bool Corpus::has_record(const std::string& id) const { return index_.count(id) > 0; }

const PaperRecord& Corpus::record(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::unknown_id, "no record with id '" + id + "'", id);
  return records_[it->second];
}

std::vector<std::string> Corpus::metric_columns() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& [name, entries] : columns_) names.push_back(name);
  return names;
}

std::vector<std::string> Corpus::available_columns() const {
  std::vector<std::string> names;
  names.push_back("human_overall");
  for (const auto& judge : judges_) {
    if (judge != "human") names.push_back("fm:" + judge);
  }
  for (const auto& [name, entries] : columns_) names.push_back(name);
  return names;
}

std::optional<double> Corpus::metric_value(const std::string& column, const std::string& id,
                                           const std::string& system) const {
  const auto col = columns_.find(column);
  if (col == columns_.end()) return std::nullopt;
  auto it = col->second.find({id, system});
  if (it != col->second.end()) return it->second;
  it = col->second.find({id, std::string()});  // record-level fallback
  if (it != col->second.end()) return it->second;
  return std::nullopt;
}

CorpusBuilder::CorpusBuilder(Corpus base) : corpus_(std::move(base)) {}

void CorpusBuilder::add_record(PaperRecord record) {
  if (corpus_.index_.count(record.id)) {
    throw Error(Errc::schema_error, "duplicate record id '" + record.id + "'", record.id);
  }
  corpus_.index_[record.id] = corpus_.records_.size();
  corpus_.records_.push_back(std::move(record));
}

void CorpusBuilder::set_facet_set(const std::string& id, const std::string& source,
                                  FacetSet facets) {
  const auto it = corpus_.index_.find(id);
  if (it == corpus_.index_.end()) throw Error(Errc::unknown_id, "no record with id '" + id + "'", id);
  corpus_.records_[it->second].facet_sets[source] = std::move(facets);
}

void CorpusBuilder::set_fm_score(const std::string& id, const std::string& system,
                                 const std::string& judge, double overall,
                                 const std::array<int, 4>& facets) {
  const auto it = corpus_.index_.find(id);
  if (it == corpus_.index_.end()) throw Error(Errc::unknown_id, "no record with id '" + id + "'", id);
  corpus_.records_[it->second].fm_overall[{system, judge}] = overall;
  corpus_.records_[it->second].fm_facets[{system, judge}] = facets;
}

void CorpusBuilder::set_metric_value(const std::string& column, const std::string& id,
                                     const std::string& system, double value) {
  if (!corpus_.index_.count(id)) throw Error(Errc::unknown_id, "no record with id '" + id + "'", id);
  corpus_.columns_[column][{id, system}] = value;
}

Corpus CorpusBuilder::build() {
  std::set<std::string> systems;
  std::set<std::string> judges;
  for (const auto& record : corpus_.records_) {
    for (const auto& [system, text] : record.generated) systems.insert(system);
    for (const auto& [system, score] : record.human_overall) {
      systems.insert(system);
      judges.insert("human");
    }
    for (const auto& [system, list] : record.human_facets) {
      systems.insert(system);
      judges.insert("human");
    }
    for (const auto& [key, score] : record.fm_overall) {
      systems.insert(key.first);
      judges.insert(key.second);
    }
    for (const auto& [key, list] : record.fm_facets) {
      systems.insert(key.first);
      judges.insert(key.second);
    }
  }
  corpus_.systems_.assign(systems.begin(), systems.end());
  corpus_.judges_.assign(judges.begin(), judges.end());
  return std::move(corpus_);
}

Corpus load_corpus_json(const json& doc, const std::string& origin) {
  std::vector<const json*> raw_records;
  if (doc.is_array()) {
    for (const auto& entry : doc) raw_records.push_back(&entry);
  } else if (doc.is_object()) {
    raw_records.push_back(&doc);
  } else {
    throw Error(Errc::schema_error, "corpus JSON must be an object or a list of objects");
  }
  const std::set<std::string> systems = discover_systems(raw_records);
  const Dataset fallback_dataset = dataset_from_origin(origin);
  CorpusBuilder builder;
  for (std::size_t i = 0; i < raw_records.size(); ++i) {
    std::vector<ColumnEntry> columns;
    PaperRecord record = parse_record(*raw_records[i], format_id(origin, i, doc.is_array()),
                                      fallback_dataset, systems, i, &columns);
    const std::string id = record.id;
    builder.add_record(std::move(record));
    for (const auto& entry : columns) {
      builder.set_metric_value(entry.name, id, entry.system, entry.value);
    }
  }
  return builder.build();
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw Error(Errc::io_error, "corpus path does not exist: " + path.string());
  }
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path, ec)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw Error(Errc::io_error, "no .json files under " + path.string());
    }
  } else {
    files.push_back(path);
  }

  CorpusBuilder builder;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::io_error, "cannot open " + file.string());
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(Errc::parse_error, "malformed JSON in " + file.string() + ": " + e.what());
    }
    Corpus part = load_corpus_json(doc, file.stem().string());
    for (const auto& record : part.records()) builder.add_record(record);
    for (const auto& [name, entries] : part.columns()) {
      for (const auto& [key, value] : entries) {
        builder.set_metric_value(name, key.first, key.second, value);
      }
    }
  }
  return builder.build();
}

std::string serialize(const Corpus& corpus) {
  json arr = json::array();
  for (const auto& record : corpus.records()) {
    json obj = record.extra.is_object() ? record.extra : json::object();
    obj["id"] = record.id;
    obj["dataset"] = std::string(dataset_name(record.dataset));
    obj["article"] = record.article;
    obj["human"] = record.human_summary;
    for (const auto& [system, text] : record.generated) obj[system] = text;
    for (const auto& [source, facets] : record.facet_sets) {
      json aspect = json::object();
      for (FacetKind kind : kFacetOrder) {
        aspect[std::string(facet_name(kind))] = facets.has(kind) ? facets.text(kind) : "";
      }
      aspect["_source"] = facets.source == FacetSource::human_annotation ? "human_annotation"
                                                                         : "llm_extraction";
      obj[source + std::string(kAspectSuffix)] = aspect;
    }
    for (const auto& [system, score] : record.human_overall) {
      obj[system + std::string(kHumanSuffix)] = score;
    }
    for (const auto& [system, list] : record.human_facets) {
      obj[system + std::string(kHumanListSuffix)] = list;
    }
    for (const auto& [key, score] : record.fm_overall) {
      obj[key.first + "_" + key.second + std::string(kFmSuffix)] = score;
    }
    for (const auto& [key, list] : record.fm_facets) {
      obj[key.first + "_" + key.second + std::string(kFmListSuffix)] = list;
    }
    for (const auto& [name, entries] : corpus.columns()) {
      for (const auto& [key, value] : entries) {
        if (key.first != record.id) continue;
        obj[key.second.empty() ? name : key.second + "_" + name] = value;
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << serialize(corpus);
}

namespace {

std::optional<double> lookup_score(const Corpus& corpus, const PaperRecord& record,
                                   const std::string& system, const std::string& column) {
  if (column == "human_overall" || column == "fm:human") {
    const auto it = record.human_overall.find(system);
    if (it != record.human_overall.end()) return it->second;
    return std::nullopt;
  }
  if (column.starts_with("fm:")) {
    const auto it = record.fm_overall.find({system, column.substr(3)});
    if (it != record.fm_overall.end()) return it->second;
    return std::nullopt;
  }
  return corpus.metric_value(column, record.id, system);
}

void require_column(const Corpus& corpus, const std::string& column) {
  if (column == "human_overall" || column == "fm:human") return;
  if (column.starts_with("fm:")) {
    const std::string judge = column.substr(3);
    const auto& judges = corpus.judges();
    if (std::find(judges.begin(), judges.end(), judge) == judges.end()) {
      throw Error(Errc::unknown_column, "no judge '" + judge + "' in corpus", column);
    }
    return;
  }
  if (!corpus.columns().count(column)) {
    throw Error(Errc::unknown_column, "no column '" + column + "' in corpus", column);
  }
}

}  // namespace

SystemScores system_scores(const Corpus& corpus, const std::string& system,
                           const std::string& column) {
  const auto& systems = corpus.systems();
  if (std::find(systems.begin(), systems.end(), system) == systems.end()) {
    throw Error(Errc::unknown_system, "no system '" + system + "' in corpus", system);
  }
  require_column(corpus, column);
  SystemScores out;
  out.scores.label = system + ":" + column;
  for (const auto& record : corpus.records()) {
    const auto value = lookup_score(corpus, record, system, column);
    if (value) {
      out.scores.values.push_back(*value);
    } else {
      out.excluded_ids.push_back(record.id);
    }
  }
  return out;
}

Corpus import_metric_column(const Corpus& corpus, const std::string& name,
                            const std::map<std::string, double>& values) {
  if (name.empty()) throw Error(Errc::config_error, "column name must be non-empty");
  if (name == "human_overall" || name == "human" || name == "article" || name == "id" ||
      name == "dataset" || name.starts_with("fm:")) {
    throw Error(Errc::duplicate_column, "column name '" + name + "' is reserved", name);
  }
  if (corpus.columns().count(name)) {
    throw Error(Errc::duplicate_column, "column '" + name + "' already exists", name);
  }
  {
    const auto& systems = corpus.systems();
    if (std::find(systems.begin(), systems.end(), name) != systems.end()) {
      throw Error(Errc::duplicate_column, "column name '" + name + "' clashes with a system", name);
    }
  }
  for (std::string_view suffix :
       {kAspectSuffix, kHumanListSuffix, kFmListSuffix, kFmSuffix, kHumanSuffix}) {
    if (std::string_view(name).ends_with(suffix)) {
      throw Error(Errc::config_error,
                  "column name '" + name + "' collides with schema suffix " + std::string(suffix));
    }
  }
  CorpusBuilder builder(corpus);
  const auto& systems = corpus.systems();
  for (const auto& [key, value] : values) {
    std::string id = key;
    std::string system;
    if (const auto pos = key.find("::"); pos != std::string::npos) {
      id = key.substr(0, pos);
      system = key.substr(pos + 2);
      if (std::find(systems.begin(), systems.end(), system) == systems.end()) {
        throw Error(Errc::unknown_system, "no system '" + system + "' in corpus", system);
      }
    }
    if (!corpus.has_record(id)) {
      throw Error(Errc::unknown_id, "no record with id '" + id + "'", id);
    }
    builder.set_metric_value(name, id, system, value);
  }
  return builder.build();
}

std::vector<std::pair<std::string, std::string>> observation_grid(
    const Corpus& corpus, const std::vector<std::string>& systems_filter) {
  std::vector<std::string> systems = systems_filter;
  if (systems.empty()) systems = corpus.systems();
  std::vector<std::pair<std::string, std::string>> grid;
  for (const auto& record : corpus.records()) {
    for (const auto& system : systems) grid.emplace_back(record.id, system);
  }
  return grid;
}

AlignedColumn observation_column(const Corpus& corpus, const std::string& column,
                                 const std::vector<std::pair<std::string, std::string>>& grid) {
  require_column(corpus, column);
  AlignedColumn out;
  out.label = column;
  out.values.reserve(grid.size());
  for (const auto& [id, system] : grid) {
    out.values.push_back(lookup_score(corpus, corpus.record(id), system, column));
  }
  return out;
}

ValidationReport validate_release(const Corpus& corpus) {
  ValidationReport report;
  std::map<Dataset, std::vector<const PaperRecord*>> splits;
  for (const auto& record : corpus.records()) splits[record.dataset].push_back(&record);

  std::size_t total_generated = 0;
  for (const auto& [dataset, records] : splits) {
    std::set<std::string> roster;
    bool uniform = true;
    for (const PaperRecord* record : records) {
      std::set<std::string> here;
      for (const auto& [system, text] : record->generated) here.insert(system);
      total_generated += here.size();
      if (record == records.front()) {
        roster = here;
      } else if (here != roster) {
        uniform = false;
      }
    }
    std::ostringstream note;
    note << dataset_name(dataset) << ": " << records.size() << " records, systems {"
         << join(std::vector<std::string>(roster.begin(), roster.end()), ", ") << "}";
    report.notes.push_back(note.str());
    if (!uniform) {
      report.passed = false;
      report.notes.push_back(std::string(dataset_name(dataset)) +
                             ": system roster differs across records");
    }
    if (records.size() != 50) {
      report.passed = false;
      report.notes.push_back(std::string(dataset_name(dataset)) + ": expected 50 records, found " +
                             std::to_string(records.size()));
    }
  }
  report.notes.push_back("total generated abstracts: " + std::to_string(total_generated));
  if (total_generated != 500) {
    report.passed = false;
    report.notes.push_back("expected 500 generated abstracts across both splits");
  }
  return report;
}

}  // namespace fmeval
