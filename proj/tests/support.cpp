#include "support.hpp"

#include <sqlite3.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqlsmell::test {

namespace fs = std::filesystem;

std::string fixture(const std::string& name) { return std::string(SQLSMELL_FIXTURES) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<RawStatement> statements(const std::string& sql, const std::string& origin) {
  return split_statements(sql, origin);
}

ApplicationContext context_of(const std::string& sql, DatasetAdapter* dataset,
                              const BuildConfig& config) {
  std::vector<AnnotatedStatement> parsed;
  for (const auto& s : statements(sql)) parsed.push_back(parse(s));
  return build_context(std::move(parsed), dataset, config);
}

std::vector<Finding> detect(const std::string& sql, DetectOptions options, DatasetAdapter* dataset,
                            const BuildConfig& config) {
  return detect_all(context_of(sql, dataset, config), options);
}

std::vector<Finding> of_kind(const std::vector<Finding>& findings, ApKind kind,
                             bool include_suppressed) {
  std::vector<Finding> out;
  for (const auto& f : findings)
    if (f.kind == kind && (include_suppressed || !f.suppressed_by_context)) out.push_back(f);
  return out;
}

std::size_t count_kind(const std::vector<Finding>& findings, ApKind kind, bool include_suppressed) {
  return of_kind(findings, kind, include_suppressed).size();
}

std::string temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  fs::path p = fs::temp_directory_path() /
               ("sqlsmell_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

void make_sqlite(const std::string& path, const std::string& script) {
  fs::remove(path);
  sqlite3* db = nullptr;
  if (sqlite3_open(path.c_str(), &db) != SQLITE_OK) throw std::runtime_error("sqlite open " + path);
  char* err = nullptr;
  int rc = sqlite3_exec(db, script.c_str(), nullptr, nullptr, &err);
  std::string msg = err ? err : "";
  sqlite3_free(err);
  sqlite3_close(db);
  if (rc != SQLITE_OK) throw std::runtime_error("sqlite script: " + msg);
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

CommandResult run_cli(const std::vector<std::string>& args, const std::string* input) {
  std::string cmd = shell_quote(SQLSMELL_BIN);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  std::string in_path;
  if (input) {
    in_path = temp_dir("stdin") + "/in.sql";
    std::ofstream(in_path) << *input;
    cmd += " < " + shell_quote(in_path);
  } else {
    cmd += " < /dev/null";
  }
  cmd += " 2>/dev/null";
  CommandResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// orders: 60 rows.
//   created_at   TIMESTAMP, no zone            -> MissingTimezone
//   zip_code     VARCHAR of numbers            -> IncorrectDataType
//   city_id/city_name  1:1, 10 values          -> DenormalizedTable
//   full_name = first_name || ' ' || last_name -> InformationDuplication
//   legacy_code  all NULL                      -> RedundantColumn
//   rating       1..5, no CHECK                -> NoDomainConstraint
//   tags         'tagN,xM' lists               -> MultiValuedAttribute
namespace {

struct SuiteRow {
  int id;
  std::string created_at, zip, city_name, first, last, full, tags;
  int city_id, rating;
};

std::vector<SuiteRow> suite_rows() {
  static const char* cities[] = {"Amsterdam", "Berlin", "Cairo", "Denver", "Essen",
                                 "Fresno",    "Geneva", "Hanoi", "Izmir",  "Jakarta"};
  std::vector<SuiteRow> rows;
  for (int i = 0; i < 60; ++i) {
    SuiteRow r;
    r.id = i + 1;
    char ts[32];
    std::snprintf(ts, sizeof ts, "2023-01-%02d 10:%02d:00", 1 + i % 28, i);
    r.created_at = ts;
    r.zip = std::to_string(50000 + i * 7);
    r.city_id = 101 + i % 10;
    r.city_name = cities[i % 10];
    r.first = "F" + std::to_string(i);
    r.last = "L" + std::to_string(i * 3);
    r.full = r.first + " " + r.last;
    r.rating = 1 + i % 5;
    r.tags = "tag" + std::to_string(i) + ",x" + std::to_string(i % 3);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

std::string data_suite_ddl() {
  return "CREATE TABLE orders (id INTEGER PRIMARY KEY, created_at TIMESTAMP, zip_code VARCHAR(10), "
         "city_id INTEGER, city_name VARCHAR(30), first_name VARCHAR(30), last_name VARCHAR(30), "
         "full_name VARCHAR(61), legacy_code VARCHAR(10), rating INTEGER, tags VARCHAR(50));";
}

std::string data_suite_script() {
  std::string s = data_suite_ddl() + "\n";
  for (const auto& r : suite_rows()) {
    s += "INSERT INTO orders VALUES (" + std::to_string(r.id) + ", '" + r.created_at + "', '" +
         r.zip + "', " + std::to_string(r.city_id) + ", '" + r.city_name + "', '" + r.first +
         "', '" + r.last + "', '" + r.full + "', NULL, " + std::to_string(r.rating) + ", '" +
         r.tags + "');\n";
  }
  return s;
}

void write_data_suite_csv(const std::string& dir) {
  std::ofstream out(dir + "/orders.csv");
  out << "id,created_at,zip_code,city_id,city_name,first_name,last_name,full_name,legacy_code,"
         "rating,tags\n";
  for (const auto& r : suite_rows())
    out << r.id << "," << r.created_at << "," << r.zip << "," << r.city_id << "," << r.city_name
        << "," << r.first << "," << r.last << "," << r.full << ",," << r.rating << ",\"" << r.tags
        << "\"\n";
}

}  // namespace sqlsmell::test
