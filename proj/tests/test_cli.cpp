#include "support.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

using namespace sqlsmell;

TEST(Cli, ExitCodes) {
  EXPECT_EQ(test::run_cli({"check", test::fixture("example1_insert.sql")}).exit_code, 1);
  EXPECT_EQ(test::run_cli({"check", test::fixture("empty.sql")}).exit_code, 0);
  std::string clean = "CREATE TABLE a (a_id INTEGER PRIMARY KEY, v VARCHAR(5));\nSELECT v FROM a WHERE a_id = 1;\n";
  EXPECT_EQ(test::run_cli({"check", "-"}, &clean).exit_code, 0);
  EXPECT_EQ(test::run_cli({"check", "/nonexistent/x.sql"}).exit_code, 2);
  EXPECT_EQ(test::run_cli({"check", test::fixture("example1_insert.sql"), "--preset", "C9"}).exit_code, 2);
  EXPECT_EQ(test::run_cli({"check", test::fixture("example1_insert.sql"), "--format", "xml"}).exit_code, 2);
  EXPECT_EQ(test::run_cli({"check", test::fixture("example1_insert.sql"), "--fail-on", "Bogus"}).exit_code, 2);
  EXPECT_EQ(test::run_cli({"frobnicate"}).exit_code, 2);
}

TEST(Cli, FailOnFilters) {
  std::string f = test::fixture("example1_insert.sql");
  EXPECT_EQ(test::run_cli({"check", f, "--fail-on", "ImplicitColumns"}).exit_code, 1);
  EXPECT_EQ(test::run_cli({"check", f, "--fail-on", "Query"}).exit_code, 1);
  EXPECT_EQ(test::run_cli({"check", f, "--fail-on", "IndexOveruse,Data"}).exit_code, 0);
}

TEST(Cli, JsonOutputIsStable) {
  std::vector<std::string> args = {"check", test::fixture("globaleaks.sql"), "--data",
                                   test::fixture("globaleaks.sqlite"), "--format", "json", "--seed", "7"};
  auto a = test::run_cli(args);
  auto b = test::run_cli(args);
  EXPECT_EQ(a.exit_code, 1);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["version"], "1.0");
  EXPECT_EQ(j["config"]["thresholds"]["seed"], 7);
  EXPECT_EQ(j["findings"][0]["kind"], "MultiValuedAttribute");
}

TEST(Cli, StdinAndMissingDataset) {
  std::string sql = test::read_file(test::fixture("example1_insert.sql"));
  auto r = test::run_cli({"check", "-", "--format", "json", "--data", "/nonexistent/db.sqlite"}, &sql);
  EXPECT_EQ(r.exit_code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["findings"][0]["kind"], "ImplicitColumns");
  EXPECT_EQ(j["findings"][0]["location"]["statement"], "stdin:1");
  EXPECT_FALSE(j["warnings"].empty());
}

TEST(Cli, PresetChangesTopFinding) {
  std::string sql =
      "CREATE TABLE acct (id INTEGER PRIMARY KEY, email VARCHAR(50), kind VARCHAR(5) CHECK (kind IN ('a','b')));\n"
      "SELECT id FROM acct WHERE email = 'x';\nSELECT id FROM acct WHERE email = 'y';\n";
  auto c1 = nlohmann::json::parse(test::run_cli({"check", "-", "--format", "json"}, &sql).out);
  auto c2 = nlohmann::json::parse(test::run_cli({"check", "-", "--format", "json", "--preset", "c2"}, &sql).out);
  EXPECT_EQ(c1["config"]["preset"], "C1");
  EXPECT_EQ(c2["config"]["preset"], "C2");
  EXPECT_NE(c1["config"]["weights"], c2["config"]["weights"]);
}
