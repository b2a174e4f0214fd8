#include "fmeval/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fmeval/errors.hpp"

namespace fmeval {

using nlohmann::json;

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

// Scalars rendered the way nlohmann dumps them (shortest round-trip for
// doubles), which keeps emitted files byte-stable across platforms.
std::string cell_text(const json& cell) {
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_null()) return "";
  return cell.dump();
}

std::string cell_markdown(const json& cell) {
  if (cell.is_number_float()) {
    const double v = cell.get<double>();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
  }
  return cell_text(cell);
}

}  // namespace

std::string_view report_kind_name(ReportKind kind) {
  switch (kind) {
    case ReportKind::system_table: return "system_table";
    case ReportKind::correlation_matrix: return "correlation_matrix";
    case ReportKind::agreement_table: return "agreement_table";
    case ReportKind::power_table: return "power_table";
    case ReportKind::facet_breakdown: return "facet_breakdown";
    case ReportKind::weight_fit: return "weight_fit";
    case ReportKind::run_audit: return "run_audit";
  }
  return "report";
}

std::string to_csv(const Report& report) {
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(report.columns[i]);
  }
  out.push_back('\n');
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_escape(cell_text(row[i]));
    }
    out.push_back('\n');
  }
  return out;
}

std::string to_json_text(const Report& report) {
  json doc;
  doc["kind"] = std::string(report_kind_name(report.kind));
  doc["columns"] = report.columns;
  doc["rows"] = report.rows;
  doc["metadata"] = report.metadata;
  return doc.dump(2) + "\n";
}

std::string to_markdown(const Report& report) {
  std::string out = "# ";
  out += report_kind_name(report.kind);
  out += "\n\n| ";
  for (const auto& column : report.columns) {
    out += column;
    out += " | ";
  }
  out += "\n|";
  for (std::size_t i = 0; i < report.columns.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& row : report.rows) {
    out += "| ";
    for (const auto& cell : row) {
      out += cell_markdown(cell);
      out += " | ";
    }
    out += "\n";
  }
  if (!report.metadata.empty()) {
    out += "\nProvenance: `";
    out += report.metadata.dump();
    out += "`\n";
  }
  return out;
}

std::vector<std::filesystem::path> write_report(const Report& report,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string stem(report_kind_name(report.kind));
  const std::vector<std::pair<std::string, std::string>> parts = {
      {stem + ".csv", to_csv(report)},
      {stem + ".json", to_json_text(report)},
      {stem + ".md", to_markdown(report)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : parts) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write report " + path.string());
    out << content;
    written.push_back(path);
  }
  return written;
}

}  // namespace fmeval
