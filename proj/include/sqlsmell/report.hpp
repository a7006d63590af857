// ---------------------------------------------------------------------------
// report.hpp
//
// Text and JSON rendering of a finished run. The JSON layout:
//
//   {version, config: {weights, thresholds, preset, inter_query},
//    findings: [{rank, kind, category, location, phase, confidence,
//                suppressed, evidence, score: {terms, contributions, total},
//                fix: {mode, statements, text, notes, ...}}],
//    summary: {total, suppressed, by_category, by_kind}, warnings}
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/config.hpp"
#include "sqlsmell/repair.hpp"

#include <string>
#include <vector>

#include "json.hpp"

namespace sqlsmell {

inline constexpr const char* kReportVersion = "1.0";

enum class ReportFormat { Text, Json };

struct Report {
  std::vector<RepairPlan> plans;
  RankingConfig ranking;
  BuildConfig thresholds;
  std::vector<std::string> warnings;
};

nlohmann::ordered_json finding_json(const RepairPlan& plan, std::size_t rank);
nlohmann::ordered_json report_json(const Report& report);
std::string emit_report(const Report& report, ReportFormat format);

}  // namespace sqlsmell
