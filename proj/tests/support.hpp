// Shared helpers for the unit and acceptance tests.
#pragma once

#include "sqlsmell/context.hpp"
#include "sqlsmell/dataset.hpp"
#include "sqlsmell/detect.hpp"
#include "sqlsmell/pipeline.hpp"

#include <string>
#include <vector>

namespace sqlsmell::test {

std::string fixture(const std::string& name);
std::string read_file(const std::string& path);

std::vector<RawStatement> statements(const std::string& sql, const std::string& origin = "t");

ApplicationContext context_of(const std::string& sql, DatasetAdapter* dataset = nullptr,
                              const BuildConfig& config = {});

std::vector<Finding> detect(const std::string& sql, DetectOptions options = {},
                            DatasetAdapter* dataset = nullptr, const BuildConfig& config = {});

std::vector<Finding> of_kind(const std::vector<Finding>& findings, ApKind kind,
                             bool include_suppressed = false);
std::size_t count_kind(const std::vector<Finding>& findings, ApKind kind,
                       bool include_suppressed = false);

// Fresh directory under the system temp dir.
std::string temp_dir(const std::string& tag);

// Runs `script` against a new SQLite database at `path`.
void make_sqlite(const std::string& path, const std::string& script);

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

// Runs the sqlsmell binary with a shell-quoted argument list; stdin from
// `input` when given.
CommandResult run_cli(const std::vector<std::string>& args, const std::string* input = nullptr);

// Seeded data-rule fixture: one table `orders` with one instance of each
// data-phase anti-pattern (see support.cpp for the column plan).
std::string data_suite_ddl();
std::string data_suite_script();
// Same rows as CSV files in `dir`.
void write_data_suite_csv(const std::string& dir);

}  // namespace sqlsmell::test
