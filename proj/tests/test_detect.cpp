#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace sqlsmell;

namespace {

std::set<ApKind> intra_kinds(const std::string& sql) {
  std::set<ApKind> out;
  for (const auto& f : detect_intra(parse(sql, "s"))) out.insert(f.kind);
  return out;
}

std::string sorted_names(const std::set<ApKind>& kinds) {
  std::string out;
  for (ApKind k : kinds) out += std::string(to_string(k)) + " ";
  return out;
}

struct Labeled {
  const char* sql;
  std::set<ApKind> expected;
};

const std::vector<Labeled>& labeled_corpus() {
  static const std::vector<Labeled> corpus = {
      {"SELECT * FROM orders", {ApKind::ColumnWildcardUsage}},
      {"SELECT name FROM users ORDER BY RAND() LIMIT 1", {ApKind::OrderingByRand}},
      {"SELECT id FROM docs WHERE body LIKE '%needle%'", {ApKind::PatternMatching}},
      {"SELECT DISTINCT u.name FROM users u JOIN orders o ON o.user_id = u.uid",
       {ApKind::DistinctAndJoin}},
      {"SELECT first_name || ' ' || last_name FROM people", {ApKind::ConcatenateNulls}},
      {"INSERT INTO users VALUES (1, 'foo')", {ApKind::ImplicitColumns}},
      {"INSERT INTO users (uid, name) VALUES (1, 'foo')", {}},
      {"CREATE TABLE accounts (id INTEGER PRIMARY KEY, name TEXT)", {ApKind::GenericPrimaryKey}},
      {"CREATE TABLE prices (sku VARCHAR(10) PRIMARY KEY, amount FLOAT)", {ApKind::RoundingErrors}},
      {"CREATE TABLE wide (k INTEGER PRIMARY KEY, alpha INT, beta INT, gamma INT, delta INT, "
       "epsilon INT, zeta INT, eta INT, theta INT, iota INT, kappa INT)",
       {ApKind::GodTable}},
      {"SELECT a.x FROM a JOIN b ON a.k = b.k JOIN c ON b.k = c.k JOIN d ON c.k = d.k JOIN e ON "
       "d.k = e.k JOIN f ON e.k = f.k",
       {ApKind::TooManyJoins}},
      {"SELECT tid FROM tenants WHERE user_ids LIKE '%,U1,%'",
       {ApKind::MultiValuedAttribute, ApKind::PatternMatching}},
      {"CREATE TABLE files (file_key INTEGER PRIMARY KEY, file_path VARCHAR(255))",
       {ApKind::ExternalDataStorage}},
      {"SELECT name FROM users WHERE uid = 5", {}},
      {"UPDATE users SET name = 'x' WHERE uid = 1", {}},
      {"DELETE FROM logs WHERE created < '2020-01-01'", {}},
      {"SELECT name FROM users WHERE name REGEXP '^a'", {ApKind::PatternMatching}},
      {"CREATE INDEX idx_name ON users (name)", {}},
      {"SELECT COUNT(*) FROM orders", {}},
      {"INSERT INTO audit SELECT uid, name FROM users", {ApKind::ImplicitColumns}},
  };
  return corpus;
}

std::string corpus_text() {
  std::string sql;
  for (const auto& l : labeled_corpus()) sql += std::string(l.sql) + ";\n";
  sql += test::read_file(test::fixture("globaleaks.sql"));
  sql += test::read_file(test::fixture("index_overuse_w1.sql"));
  return sql;
}

std::vector<std::string> redundant_indexes(const std::string& fixture) {
  auto findings = test::detect(test::read_file(test::fixture(fixture)));
  std::vector<std::string> out;
  for (const auto& f : test::of_kind(findings, ApKind::IndexOveruse)) out.push_back(f.location.object);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Registry, CoversEveryQueryKindOnce) {
  std::set<ApKind> seen;
  for (const auto& r : rule_registry()) {
    EXPECT_TRUE(seen.insert(r.kind).second) << to_string(r.kind);
    EXPECT_NE(r.phase, Phase::Data);
  }
  // Data-category kinds come from the profiler.
  for (const auto& k : all_kinds())
    if (k.category != Category::Data) EXPECT_TRUE(seen.count(k.kind)) << to_string(k.kind);
}

TEST(Registry, RulesForQueryFiltersByKind) {
  auto s = parse("INSERT INTO t VALUES (1)");
  for (const auto* r : rules_for_query(s)) EXPECT_TRUE(r->applies_to(StatementKind::Insert));
}

TEST(Registry, ExtensibleInProcess) {
  DetectionRule rule{ApKind::OrderingByRand, "test.custom", Phase::IntraQuery,
                     {StatementKind::Other},
                     [](const AnnotatedStatement& s, const ApplicationContext&) {
                       Finding f;
                       f.kind = ApKind::OrderingByRand;
                       f.location.statement_id = s.source_id;
                       f.evidence = "custom";
                       return std::vector<Finding>{f};
                     }};
  register_rule(rule);
  auto found = detect_intra(parse("FROBNICATE everything", "x"));
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].evidence, "custom");
}

TEST(Intra, LabeledCorpus) {
  std::size_t correct = 0;
  for (const auto& l : labeled_corpus()) {
    auto got = intra_kinds(l.sql);
    EXPECT_EQ(sorted_names(got), sorted_names(l.expected)) << l.sql;
    if (got == l.expected) ++correct;
  }
  EXPECT_EQ(correct, labeled_corpus().size());
}

TEST(Intra, Example1ImplicitColumns) {
  auto f = detect_intra(parse(test::read_file(test::fixture("example1_insert.sql")), "e1"));
  ASSERT_EQ(test::count_kind(f, ApKind::ImplicitColumns), 1u);
  EXPECT_EQ(f[0].location.table, "Tenant");
}

TEST(Intra, TaskQueries) {
  auto findings = test::detect(test::read_file(test::fixture("tasks.sql")), DetectOptions{false, false});
  EXPECT_EQ(test::count_kind(findings, ApKind::PatternMatching), 2u);
  EXPECT_EQ(test::count_kind(findings, ApKind::ColumnWildcardUsage), 2u);
  EXPECT_EQ(test::count_kind(findings, ApKind::MultiValuedAttribute), 2u);
  for (const auto& f : test::of_kind(findings, ApKind::MultiValuedAttribute)) {
    EXPECT_TRUE(iequals(f.location.column, "User_IDs"));
    EXPECT_TRUE(iequals(f.location.table, "Tenants"));
  }
}

TEST(Intra, ThresholdsFromConfig) {
  BuildConfig cfg;
  cfg.join_threshold = 2;
  auto f = detect_intra(parse("SELECT a.x FROM a JOIN b ON a.k = b.k JOIN c ON b.k = c.k"), cfg);
  EXPECT_EQ(test::count_kind(f, ApKind::TooManyJoins), 1u);
  EXPECT_EQ(test::count_kind(detect_intra(parse("SELECT a.x FROM a JOIN b ON a.k = b.k JOIN c ON b.k = c.k")),
                             ApKind::TooManyJoins),
            0u);
}

TEST(Inter, NoForeignKeyNeedsContext) {
  std::string sql = test::read_file(test::fixture("no_foreign_key.sql"));
  auto with = test::detect(sql);
  auto nfk = test::of_kind(with, ApKind::NoForeignKey);
  ASSERT_EQ(nfk.size(), 1u);
  EXPECT_EQ(nfk[0].location.table, "Questionnaire");
  EXPECT_TRUE(iequals(nfk[0].location.column, "Tenant_ID"));
  ASSERT_TRUE(nfk[0].location.related.has_value());
  EXPECT_TRUE(nfk[0].location.related->same_as(ColumnRef{"Tenant", "Tenant_ID"}));
  EXPECT_EQ(nfk[0].phase, Phase::InterQuery);
  auto without = test::detect(sql, DetectOptions{false, false});
  EXPECT_EQ(test::count_kind(without, ApKind::NoForeignKey, true), 0u);
}

TEST(Inter, DeclaredForeignKeySilencesRule) {
  auto f = test::detect(
      "CREATE TABLE Tenant(Tenant_ID INTEGER PRIMARY KEY);"
      "CREATE TABLE Q (Q_ID INTEGER PRIMARY KEY, Tenant_ID INTEGER REFERENCES Tenant(Tenant_ID));"
      "SELECT * FROM Q JOIN Tenant ON Tenant.Tenant_ID = Q.Tenant_ID;");
  EXPECT_EQ(test::count_kind(f, ApKind::NoForeignKey), 0u);
}

TEST(Inter, EnumeratedTypesFromCheck) {
  auto f = test::detect(test::read_file(test::fixture("enumerated_types.sql")));
  auto e = test::of_kind(f, ApKind::EnumeratedTypes);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].location.table, "User");
  EXPECT_TRUE(iequals(e[0].location.column, "ROLE"));
  EXPECT_EQ(e[0].location.object, "User_Role_Check");
  auto enum_type = test::detect("CREATE TABLE u (k INT PRIMARY KEY, role ENUM('a', 'b'));");
  EXPECT_EQ(test::count_kind(enum_type, ApKind::EnumeratedTypes), 1u);
  auto range = test::detect("ALTER TABLE u ADD CONSTRAINT c CHECK (age > 0);");
  EXPECT_EQ(test::count_kind(range, ApKind::EnumeratedTypes), 0u);
}

TEST(Inter, IndexOveruseWorkloads) {
  EXPECT_EQ(redundant_indexes("index_overuse_w1.sql"), (std::vector<std::string>{"idx_actv", "idx_zone"}));
  EXPECT_EQ(redundant_indexes("index_overuse_w2.sql"), (std::vector<std::string>{"idx_zone_actv"}));
}

TEST(Inter, IndexUnderuse) {
  std::string ddl = "CREATE TABLE orders (oid INTEGER PRIMARY KEY, status VARCHAR(10));";
  auto two = test::detect(ddl +
                          "SELECT oid FROM orders WHERE status = 'open';"
                          "UPDATE orders SET status = 'x' WHERE status = 'open';");
  auto u = test::of_kind(two, ApKind::IndexUnderuse);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_TRUE(iequals(u[0].location.column, "status"));
  auto one = test::detect(ddl + "SELECT oid FROM orders WHERE status = 'open';");
  EXPECT_EQ(test::count_kind(one, ApKind::IndexUnderuse), 0u);
  auto indexed = test::detect(ddl + "CREATE INDEX s ON orders (status);" +
                              "SELECT oid FROM orders WHERE status = 'open';"
                              "SELECT oid FROM orders WHERE status = 'done';");
  EXPECT_EQ(test::count_kind(indexed, ApKind::IndexUnderuse), 0u);
}

TEST(Inter, SchemaShapes) {
  auto f = test::detect(
      "CREATE TABLE log (msg TEXT);"
      "CREATE TABLE sales_2019 (k INT PRIMARY KEY);"
      "CREATE TABLE sales_2020 (k INT PRIMARY KEY);"
      "CREATE TABLE q (k INT PRIMARY KEY, phone1 TEXT, phone2 TEXT, phone3 TEXT);"
      "CREATE TABLE node (node_id INT PRIMARY KEY, parent_id INT REFERENCES node(node_id));");
  EXPECT_EQ(test::count_kind(f, ApKind::NoPrimaryKey), 1u);
  EXPECT_EQ(test::of_kind(f, ApKind::NoPrimaryKey)[0].location.table, "log");
  EXPECT_EQ(test::count_kind(f, ApKind::CloneTable), 1u);
  EXPECT_EQ(test::count_kind(f, ApKind::DataInMetadata), 1u);
  EXPECT_EQ(test::count_kind(f, ApKind::AdjacencyList), 1u);
}

TEST(Context, MvaSuspicionSuppressedByNumericType) {
  auto f = test::detect(
      "CREATE TABLE t (k INT PRIMARY KEY, user_ids INTEGER);"
      "SELECT k FROM t WHERE user_ids LIKE '%,1,%';");
  auto mva = test::of_kind(f, ApKind::MultiValuedAttribute, true);
  ASSERT_EQ(mva.size(), 1u);
  EXPECT_TRUE(mva[0].suppressed_by_context);
  EXPECT_FALSE(mva[0].suppression_reason.empty());
}

TEST(Context, MvaConfirmedByData) {
  auto ds = open_dataset(test::fixture("globaleaks.sqlite"));
  auto f = test::detect(test::read_file(test::fixture("globaleaks.sql")), {}, ds.get());
  auto mva = test::of_kind(f, ApKind::MultiValuedAttribute);
  ASSERT_EQ(mva.size(), 2u);
  for (const auto& m : mva) EXPECT_EQ(m.confidence, Confidence::High);
}

TEST(Context, ConcatOverNotNullSuppressed) {
  auto f = test::detect(
      "CREATE TABLE p (k INT PRIMARY KEY, a TEXT NOT NULL, b TEXT NOT NULL, c TEXT);"
      "SELECT a || b FROM p;"
      "SELECT a || c FROM p;");
  auto c = test::of_kind(f, ApKind::ConcatenateNulls, true);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_TRUE(c[0].suppressed_by_context);
  EXPECT_FALSE(c[1].suppressed_by_context);
}

TEST(Properties, SuppressionMonotonicity) {
  std::string sql = corpus_text();
  auto off = test::detect(sql, DetectOptions{false, false});
  auto on = test::detect(sql, DetectOptions{true, false});
  std::vector<std::pair<ApKind, Location>> a, b;
  for (const auto& f : off) a.emplace_back(f.kind, f.location);
  for (const auto& f : on)
    if (f.phase == Phase::IntraQuery) b.emplace_back(f.kind, f.location);
  EXPECT_EQ(a, b);
}

TEST(Properties, DeterministicAcrossWorkers) {
  std::string sql = corpus_text();
  auto ctx = test::context_of(sql);
  auto one = detect_all(ctx, DetectOptions{true, true, 1});
  for (std::size_t workers : {2u, 4u, 7u}) {
    auto many = detect_all(ctx, DetectOptions{true, true, workers});
    ASSERT_EQ(one.size(), many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      EXPECT_EQ(one[i].kind, many[i].kind);
      EXPECT_EQ(one[i].location, many[i].location);
      EXPECT_EQ(one[i].evidence, many[i].evidence);
      EXPECT_EQ(one[i].suppressed_by_context, many[i].suppressed_by_context);
    }
  }
}

TEST(Properties, NonIntraFindingsCarrySnapshot) {
  auto ctx = test::context_of(test::read_file(test::fixture("no_foreign_key.sql")));
  for (const auto& f : detect_all(ctx))
    if (f.phase != Phase::IntraQuery) EXPECT_EQ(f.context_snapshot, ctx.snapshot);
}
