#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace fmeval {

enum class ReportKind {
  system_table,
  correlation_matrix,
  agreement_table,
  power_table,
  facet_breakdown,
  weight_fit,
  run_audit,
};

std::string_view report_kind_name(ReportKind kind);

// A flat table plus provenance. Every report is emitted three ways: CSV for
// analysis, JSON for machines, Markdown for humans.
struct Report {
  ReportKind kind = ReportKind::system_table;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;  // scalar cells
  nlohmann::json metadata = nlohmann::json::object();
};

std::string to_csv(const Report& report);
std::string to_json_text(const Report& report);
std::string to_markdown(const Report& report);

// Writes <kind>.csv/.json/.md under dir; returns the written paths.
std::vector<std::filesystem::path> write_report(const Report& report,
                                                const std::filesystem::path& dir);

}  // namespace fmeval
