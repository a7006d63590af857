#include "sqlsmell/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sqlsmell {

namespace fs = std::filesystem;

Analysis analyze(std::vector<RawStatement> statements, DatasetAdapter* dataset,
                 const AnalysisOptions& options) {
  std::vector<AnnotatedStatement> parsed;
  parsed.reserve(statements.size());
  for (const auto& s : statements) parsed.push_back(parse(s));
  Analysis out;
  out.ctx = build_context(std::move(parsed), dataset, options.build);
  auto findings = detect_all(out.ctx, options.detect);
  out.ranked = rank(findings, options.ranking, options.metrics);
  out.plans = fix(out.ranked, out.ctx, options.repair);
  return out;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void append(std::vector<RawStatement>& out, std::string_view text, const std::string& origin) {
  auto stmts = split_statements(text, origin);
  out.insert(out.end(), stmts.begin(), stmts.end());
}

}  // namespace

std::vector<RawStatement> load_sql(const std::vector<std::string>& inputs, std::istream& stdin_) {
  if (inputs.empty()) throw IoError("no SQL input given");
  std::vector<RawStatement> out;
  for (const auto& input : inputs) {
    if (input == "-") {
      std::ostringstream ss;
      ss << stdin_.rdbuf();
      append(out, ss.str(), "stdin");
      continue;
    }
    fs::path p(input);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::recursive_directory_iterator(p, ec))
        if (e.is_regular_file() && e.path().extension() == ".sql") files.push_back(e.path());
      if (ec) throw IoError("cannot list " + input);
      std::sort(files.begin(), files.end());
      for (const auto& f : files) append(out, read_file(f), f.generic_string());
    } else if (fs::is_regular_file(p, ec)) {
      append(out, read_file(p), p.generic_string());
    } else {
      throw IoError("no such file or directory: " + input);
    }
  }
  return out;
}

bool valid_fail_on(std::string_view name) {
  return kind_from_string(name).has_value() || category_from_string(name).has_value();
}

PipelineResult run_pipeline(const PipelineOptions& options, std::istream& stdin_) {
  auto statements = load_sql(options.inputs, stdin_);
  PipelineResult result;
  result.report.warnings = options.warnings;

  std::unique_ptr<DatasetAdapter> dataset;
  if (options.data) {
    try {
      dataset = open_dataset(*options.data);
    } catch (const DatasetError& e) {
      result.report.warnings.push_back(std::string("dataset unavailable, DDL-only mode: ") +
                                       e.what());
    }
  }
  Analysis a = analyze(std::move(statements), dataset.get(), options.analysis);
  result.report.warnings.insert(result.report.warnings.end(), a.ctx.warnings.begin(),
                                a.ctx.warnings.end());
  result.report.plans = std::move(a.plans);
  result.report.ranking = options.analysis.ranking;
  result.report.thresholds = options.analysis.build;
  result.output = emit_report(result.report, options.format);

  auto counts = [&](const Finding& f) {
    if (f.suppressed_by_context) return false;
    if (options.fail_on.empty()) return true;
    for (const auto& name : options.fail_on) {
      if (auto k = kind_from_string(name); k && *k == f.kind) return true;
      if (auto c = category_from_string(name); c && *c == f.category()) return true;
    }
    return false;
  };
  bool failing = std::any_of(result.report.plans.begin(), result.report.plans.end(),
                             [&](const RepairPlan& p) { return counts(p.finding); });
  result.exit_code = failing ? kExitFindings : kExitClean;
  return result;
}

}  // namespace sqlsmell
