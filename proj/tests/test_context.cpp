#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace sqlsmell;

namespace {

class FailingDataset : public DatasetAdapter {
 public:
  std::vector<std::string> tables() override { return {"t"}; }
  std::vector<std::string> columns(const std::string&) override { return {"a"}; }
  std::vector<std::string> declared_types(const std::string&) override { return {""}; }
  void scan(const std::string&, const std::function<bool(const Row&)>&) override {
    throw DatasetError("disk on fire");
  }
  std::string describe() const override { return "failing"; }
};

}  // namespace

TEST(Context, SchemaFromDdl) {
  auto ctx = test::context_of(test::read_file(test::fixture("no_foreign_key.sql")));
  const TableSchema* t = ctx.table("TENANT");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->name, "Tenant");
  EXPECT_EQ(t->primary_key(), std::vector<std::string>{"Tenant_ID"});
  EXPECT_TRUE(t->not_null("zone_id"));
  ASSERT_EQ(t->indexes.size(), 1u);
  EXPECT_TRUE(t->indexes[0].primary);
  const TableSchema* q = ctx.table("Questionnaire");
  ASSERT_NE(q, nullptr);
  EXPECT_EQ(q->columns.size(), 4u);
  EXPECT_EQ(q->foreign_key_on("Tenant_ID"), nullptr);
  EXPECT_EQ(ctx.query_registry.size(), 3u);
  for (std::size_t i = 0; i < ctx.query_registry.size(); ++i)
    EXPECT_EQ(ctx.query_registry[i].ordinal, i);
}

TEST(Context, JoinGraphFromEqualityPredicates) {
  auto ctx = test::context_of(test::read_file(test::fixture("no_foreign_key.sql")));
  ASSERT_EQ(ctx.join_graph.size(), 1u);
  EXPECT_TRUE(ctx.joined(ColumnRef{"Tenant", "Tenant_ID"}, ColumnRef{"Questionnaire", "Tenant_ID"}));
  EXPECT_TRUE(ctx.joined(ColumnRef{"questionnaire", "tenant_id"}, ColumnRef{"tenant", "tenant_id"}));
  EXPECT_EQ(ctx.join_graph[0].ordinal, 2u);
}

TEST(Context, IndexWithoutOnAttachesToOwningTable) {
  auto ctx = test::context_of(test::read_file(test::fixture("index_overuse_w1.sql")));
  const TableSchema* t = ctx.table("Tenant");
  ASSERT_NE(t, nullptr);
  std::vector<std::string> names;
  for (const auto& i : t->indexes)
    if (!i.implicit) names.push_back(i.name);
  EXPECT_EQ(names, (std::vector<std::string>{"idx_zone_actv", "idx_zone", "idx_actv"}));
  EXPECT_TRUE(ctx.warnings.empty());
}

TEST(Context, AmbiguousIndexWarns) {
  auto ctx = test::context_of("CREATE TABLE a (x INT); CREATE TABLE b (x INT); CREATE INDEX i (x);");
  EXPECT_FALSE(ctx.warnings.empty());
}

TEST(Context, AlterTableAddsAndDrops) {
  auto ctx = test::context_of(
      "CREATE TABLE t (a INT, b TEXT);"
      "ALTER TABLE t ADD COLUMN c INT;"
      "ALTER TABLE t ADD CONSTRAINT t_ck CHECK (c IN (1, 2));"
      "ALTER TABLE t DROP COLUMN b;");
  const TableSchema* t = ctx.table("t");
  ASSERT_NE(t, nullptr);
  EXPECT_TRUE(t->has_column("c"));
  EXPECT_FALSE(t->has_column("b"));
  EXPECT_TRUE(t->has_check_on("c"));
  auto ctx2 = test::context_of(
      "CREATE TABLE t (a INT, c INT, CONSTRAINT t_ck CHECK (c > 0));"
      "ALTER TABLE t DROP CONSTRAINT t_ck;");
  EXPECT_FALSE(ctx2.table("t")->has_check_on("c"));
}

TEST(Context, ImpactedQueries) {
  auto ctx = test::context_of(test::read_file(test::fixture("globaleaks.sql")));
  Finding f;
  f.location.table = "Tenants";
  f.location.column = "User_IDs";
  std::vector<std::string> ids;
  for (const auto& s : impacted_queries(ctx, f)) ids.push_back(s.source_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"t:1", "t:3", "t:5"}));
  f.location.table = "Users";
  f.location.column = "Email";
  ids.clear();
  for (const auto& s : impacted_queries(ctx, f)) ids.push_back(s.source_id);
  // the DDL and the SELECT * join
  EXPECT_EQ(ids, (std::vector<std::string>{"t:2", "t:5"}));
  Finding none;
  EXPECT_TRUE(impacted_queries(ctx, none).empty());
}

TEST(Context, SqliteDatasetProfiles) {
  auto ds = open_dataset(test::fixture("globaleaks.sqlite"));
  auto ctx = test::context_of(test::read_file(test::fixture("globaleaks.sql")), ds.get());
  EXPECT_TRUE(ctx.has_dataset);
  const ColumnProfile* p = ctx.profile("tenants", "user_ids");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->row_count_sampled, 2u);
  EXPECT_DOUBLE_EQ(p->delimiter_list_fraction, 1.0);
  EXPECT_EQ(ctx.profile("Users", "Role")->distinct_count, 4u);
}

TEST(Context, CsvDatasetMatchesSqlite) {
  auto csv = open_dataset(test::fixture("globaleaks_csv"));
  auto lite = open_dataset(test::fixture("globaleaks.sqlite"));
  auto a = test::context_of("", csv.get());
  auto b = test::context_of("", lite.get());
  for (const auto& [key, p] : b.profiles) {
    const ColumnProfile* q = a.profile(key.first, key.second);
    ASSERT_NE(q, nullptr) << key.first << "." << key.second;
    EXPECT_EQ(q->distinct_count, p.distinct_count);
    EXPECT_EQ(q->row_count_sampled, p.row_count_sampled);
    EXPECT_EQ(q->delimiter_list_fraction, p.delimiter_list_fraction);
  }
  // Schema comes from the dataset when no DDL is given.
  EXPECT_TRUE(b.table("Users") && b.table("Users")->has_primary_key());
  EXPECT_TRUE(a.table("Users") && a.table("Users")->from_data);
}

TEST(Context, DatasetFailureDegradesToDdlOnly) {
  FailingDataset ds;
  auto ctx = test::context_of("CREATE TABLE t (a INT);", &ds);
  EXPECT_FALSE(ctx.warnings.empty());
  EXPECT_TRUE(ctx.profiles.empty());
  EXPECT_NE(ctx.table("t"), nullptr);
}

TEST(Context, OpenDatasetRejectsUnknownFiles) {
  std::string dir = test::temp_dir("ds");
  std::ofstream(dir + "/x.txt") << "not a database";
  EXPECT_THROW(open_dataset(dir + "/x.txt"), DatasetError);
  EXPECT_THROW(open_dataset(dir + "/missing.sqlite"), DatasetError);
}

TEST(Context, SnapshotIsStable) {
  std::string sql = test::read_file(test::fixture("no_foreign_key.sql"));
  EXPECT_EQ(test::context_of(sql).snapshot, test::context_of(sql).snapshot);
  EXPECT_NE(test::context_of(sql).snapshot, test::context_of(sql + "CREATE TABLE z (a INT);").snapshot);
}

TEST(Csv, Rfc4180) {
  auto rows = parse_csv("\xEF\xBB\xBF" "a,b,c\r\n1,\"x, \"\"y\"\"\",\n\"multi\nline\",,\"\"\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0].value_or("?"), "a");
  EXPECT_EQ(rows[1][1].value_or("?"), "x, \"y\"");
  EXPECT_FALSE(rows[1][2].has_value());
  EXPECT_EQ(rows[2][0].value_or("?"), "multi\nline");
  EXPECT_FALSE(rows[2][1].has_value());
  EXPECT_EQ(rows[2][2].value_or("?"), "");
  EXPECT_THROW(parse_csv("\"open"), DatasetError);
}

TEST(Types, Classification) {
  EXPECT_TRUE(textual_type("VARCHAR(30)"));
  EXPECT_TRUE(textual_type("character varying"));
  EXPECT_FALSE(textual_type("INTEGER"));
  EXPECT_TRUE(numeric_type("NUMERIC(10, 2)"));
  EXPECT_TRUE(numeric_type("bigint"));
  EXPECT_FALSE(numeric_type("VARCHAR(10)"));
}
