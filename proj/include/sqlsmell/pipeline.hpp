// ---------------------------------------------------------------------------
// pipeline.hpp
//
// parse -> build_context -> detect_all -> rank -> fix -> report, as run by
// the CLI and the REST service.
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/config.hpp"
#include "sqlsmell/context.hpp"
#include "sqlsmell/detect.hpp"
#include "sqlsmell/ranker.hpp"
#include "sqlsmell/repair.hpp"
#include "sqlsmell/report.hpp"

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqlsmell {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum ExitCode { kExitClean = 0, kExitFindings = 1, kExitUsage = 2 };

struct AnalysisOptions {
  BuildConfig build;
  RankingConfig ranking = preset("C1");
  MetricsTable metrics = default_metrics();
  DetectOptions detect;
  RepairOptions repair;
};

struct Analysis {
  ApplicationContext ctx;
  std::vector<RankedFinding> ranked;
  std::vector<RepairPlan> plans;
};

Analysis analyze(std::vector<RawStatement> statements, DatasetAdapter* dataset,
                 const AnalysisOptions& options);

// Reads SQL from files, directories (*.sql, sorted, recursive) and "-"
// (stdin). Statement ids are "<path>:<line>". Throws IoError.
std::vector<RawStatement> load_sql(const std::vector<std::string>& inputs, std::istream& stdin_);

struct PipelineOptions {
  std::vector<std::string> inputs;
  std::optional<std::string> data;
  AnalysisOptions analysis;
  ReportFormat format = ReportFormat::Text;
  // Kind or category names; empty means any unsuppressed finding counts.
  std::vector<std::string> fail_on;
  std::vector<std::string> warnings;
};

struct PipelineResult {
  Report report;
  std::string output;
  int exit_code = kExitClean;
};

// Throws IoError / ConfigError for usage problems; dataset failures only add
// a warning.
PipelineResult run_pipeline(const PipelineOptions& options, std::istream& stdin_);

// True when a --fail-on entry names a kind or category.
bool valid_fail_on(std::string_view name);

}  // namespace sqlsmell
