#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sqlsmell;

namespace {

std::vector<std::string> texts(const AnnotatedStatement& s, ClauseRole role) {
  std::vector<std::string> out;
  for (const auto& sp : s.spans(role)) out.push_back(s.text_of(sp));
  return out;
}

bool has_column(const AnnotatedStatement& s, std::string_view table, std::string_view column) {
  for (const auto& c : s.columns_referenced)
    if (iequals(c.table, table) && iequals(c.column, column)) return true;
  return false;
}

// Small grammar over a fixed vocabulary; random case and spacing.
class StatementGen {
 public:
  explicit StatementGen(unsigned seed) : rng_(seed) {}

  std::string next() {
    switch (pick(6)) {
      case 0: return select();
      case 1: return insert();
      case 2: return update();
      case 3: return "DELETE FROM " + table() + sp() + "WHERE " + predicate();
      case 4: return create();
      default: return "CREATE INDEX idx_" + std::to_string(pick(50)) + " ON " + table() + " (" +
                      column() + ", " + column() + ")";
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::string sp() { return pick(4) == 0 ? "\n  " : " "; }
  std::string kw(std::string w) {
    if (pick(2))
      for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return w;
  }
  std::string table() {
    static const char* t[] = {"Tenant", "Users", "orders", "\"Line Items\"", "q"};
    return t[pick(5)];
  }
  std::string column() {
    static const char* c[] = {"Tenant_ID", "Zone_ID", "Active", "name", "price", "\"Odd Col\""};
    return c[pick(6)];
  }
  std::string literal() {
    static const char* l[] = {"'Z1'", "42", "3.5", "TRUE", "NULL", "'it''s'"};
    return l[pick(6)];
  }
  std::string predicate() {
    static const char* ops[] = {"=", "<", ">=", "<>", "LIKE"};
    std::string p = column() + " " + ops[pick(5)] + " " + literal();
    if (pick(3) == 0) p += sp() + kw("AND") + " " + column() + " " + kw("IN") + " (1, 2, 3)";
    if (pick(4) == 0) p += " " + kw("OR") + " (" + column() + " " + kw("BETWEEN") + " 1 AND 9)";
    return p;
  }
  std::string select() {
    std::string s = kw("SELECT") + " ";
    if (pick(4) == 0) s += kw("DISTINCT") + " ";
    s += pick(3) == 0 ? "*" : column() + ", " + "COUNT(" + column() + ")";
    s += sp() + kw("FROM") + " " + table() + " a";
    for (std::size_t j = pick(3); j > 0; --j)
      s += sp() + kw("JOIN") + " " + table() + " b" + std::to_string(j) + " " + kw("ON") + " a." +
           column() + " = b" + std::to_string(j) + "." + column();
    if (pick(3)) s += sp() + kw("WHERE") + " " + predicate();
    if (pick(3) == 0) s += sp() + kw("GROUP BY") + " " + column();
    if (pick(3) == 0) s += sp() + kw("ORDER BY") + " " + column() + " DESC";
    if (pick(3) == 0) s += sp() + kw("LIMIT") + " 10";
    if (pick(6) == 0) s += " -- trailing note";
    return s;
  }
  std::string insert() {
    std::string s = kw("INSERT INTO") + " " + table();
    if (pick(2)) s += " (" + column() + ", " + column() + ")";
    s += " " + kw("VALUES") + " (" + literal() + ", " + literal() + ")";
    if (pick(2)) s += ", (" + literal() + ", " + literal() + ")";
    return s;
  }
  std::string update() {
    return kw("UPDATE") + " " + table() + " " + kw("SET") + " " + column() + " = " + literal() +
           sp() + kw("WHERE") + " " + predicate();
  }
  std::string create() {
    std::string s = kw("CREATE TABLE") + " " + table() + " (id INTEGER PRIMARY KEY";
    for (std::size_t j = pick(4); j > 0; --j) {
      s += ", c" + std::to_string(j) + " ";
      static const char* types[] = {"VARCHAR(30)", "NUMERIC(10, 2)", "TIMESTAMP WITH TIME ZONE",
                                    "BOOLEAN NOT NULL", "INTEGER REFERENCES Tenant(Tenant_ID)"};
      s += types[pick(5)];
    }
    if (pick(2)) s += ", CONSTRAINT ck CHECK (c1 IN ('a', 'b'))";
    return s + ")";
  }

  std::mt19937 rng_;
};

}  // namespace

TEST(Tokenizer, ClassifiesTokens) {
  auto r = tokenize("SELECT \"Odd Col\", 'it''s' FROM t -- hi\nWHERE a <> 1.5");
  ASSERT_TRUE(r.ok);
  std::vector<TokenKind> kinds;
  for (const auto& t : r.tokens)
    if (!t.trivia()) kinds.push_back(t.kind);
  std::vector<TokenKind> want = {TokenKind::Keyword,     TokenKind::Identifier, TokenKind::Punctuation,
                                 TokenKind::Literal,     TokenKind::Keyword,    TokenKind::Identifier,
                                 TokenKind::Keyword,     TokenKind::Identifier, TokenKind::Operator,
                                 TokenKind::Literal};
  EXPECT_EQ(kinds, want);
}

TEST(Tokenizer, UnterminatedQuoteIsReported) {
  EXPECT_FALSE(tokenize("SELECT 'abc").ok);
  EXPECT_FALSE(tokenize("SELECT /* abc").ok);
}

TEST(Tokenizer, CanonicalNames) {
  EXPECT_EQ(canonical("\"Tenant_ID\""), "tenant_id");
  EXPECT_EQ(canonical("`Users`"), "users");
  EXPECT_EQ(string_literal_value("'it''s'"), "it's");
  EXPECT_TRUE(iequals("ABC", "abc"));
}

TEST(Splitter, RespectsQuotesAndComments) {
  auto s = split_statements("SELECT ';' FROM t; -- note; here\nSELECT 2; /* ; */ SELECT 3;", "f");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].source_id, "f:1");
  EXPECT_NE(s[0].text.find("';'"), std::string::npos);
  EXPECT_NE(s[1].text.find("-- note; here"), std::string::npos);
}

TEST(Splitter, DropsTrailingCommentAndBlanks) {
  EXPECT_TRUE(split_statements("  \n -- nothing here\n").empty());
  EXPECT_EQ(split_statements("SELECT 1;;;").size(), 1u);
}

TEST(Parser, Example1Insert) {
  auto s = parse(test::read_file(test::fixture("example1_insert.sql")), "x");
  EXPECT_EQ(s.kind, StatementKind::Insert);
  EXPECT_EQ(s.target_table.value_or(""), "Tenant");
  EXPECT_FALSE(s.has_clause(ClauseRole::ColumnList));
  EXPECT_EQ(texts(s, ClauseRole::Values), std::vector<std::string>{"('T1', 'Z1', True, 'U1,U2')"});
}

TEST(Parser, JoinSelectResolvesAliases) {
  auto s = parse(
      "SELECT q.Name, q.Editable, t.Active FROM Questionnaire q JOIN Tenant T ON T.Tenant_ID = "
      "Q.Tenant_ID WHERE q.Editable = true");
  EXPECT_EQ(s.kind, StatementKind::Select);
  EXPECT_EQ(s.join_count, 1u);
  EXPECT_EQ(s.tables_referenced, (std::vector<std::string>{"Questionnaire", "Tenant"}));
  EXPECT_TRUE(has_column(s, "Questionnaire", "Name"));
  EXPECT_TRUE(has_column(s, "Tenant", "Active"));
  ASSERT_EQ(s.predicates.size(), 2u);
  EXPECT_EQ(s.predicates[0].clause, ClauseRole::Joins);
  ASSERT_TRUE(s.predicates[0].rhs_column.has_value());
  EXPECT_TRUE(s.predicates[0].rhs_column->same_as(ColumnRef{"Questionnaire", "Tenant_ID"}));
  EXPECT_EQ(s.predicates[1].clause, ClauseRole::Where);
  EXPECT_TRUE(s.predicates[1].rhs_is_literal);
}

TEST(Parser, CreateTableColumnsAndConstraints) {
  auto s = parse(
      "CREATE TABLE Questionnaire (Questionnaire_ID UUID PRIMARY KEY, Tenant_ID INTEGER "
      "REFERENCES Tenant(Tenant_ID) ON DELETE CASCADE, Name VARCHAR(30) NOT NULL, At TIMESTAMP "
      "WITH TIME ZONE, CONSTRAINT q_ck CHECK (Name <> ''))");
  EXPECT_EQ(s.kind, StatementKind::CreateTable);
  ASSERT_EQ(s.column_defs.size(), 4u);
  EXPECT_EQ(s.column_defs[2].declared_type, "VARCHAR(30)");
  EXPECT_FALSE(s.column_defs[2].nullable);
  EXPECT_EQ(s.column_defs[3].declared_type, "TIMESTAMP WITH TIME ZONE");
  std::vector<ConstraintKind> kinds;
  for (const auto& c : s.constraints) kinds.push_back(c.kind);
  EXPECT_EQ(kinds, (std::vector<ConstraintKind>{ConstraintKind::PrimaryKey, ConstraintKind::ForeignKey,
                                                ConstraintKind::NotNull, ConstraintKind::Check}));
  EXPECT_TRUE(s.constraints[1].target->same_as(ColumnRef{"Tenant", "Tenant_ID"}));
  EXPECT_EQ(s.constraints[3].name.value_or(""), "q_ck");
  EXPECT_FALSE(s.constraints[3].inline_decl);
}

TEST(Parser, AlterTableCheck) {
  auto s = parse(test::read_file(test::fixture("enumerated_types.sql")));
  EXPECT_EQ(s.kind, StatementKind::AlterTable);
  ASSERT_EQ(s.constraints.size(), 1u);
  EXPECT_EQ(s.constraints[0].kind, ConstraintKind::Check);
  EXPECT_EQ(s.constraints[0].name.value_or(""), "User_Role_Check");
  EXPECT_EQ(s.constraints[0].expression_text.value_or(""), "ROLE IN ('R1', 'R2', 'R3')");
}

TEST(Parser, IndexWithoutOnClause) {
  auto s = parse("CREATE INDEX idx_zone_actv (Zone_ID, Active)");
  EXPECT_EQ(s.kind, StatementKind::CreateIndex);
  EXPECT_EQ(s.index_name.value_or(""), "idx_zone_actv");
  EXPECT_FALSE(s.target_table.has_value());
  EXPECT_EQ(s.index_columns, (std::vector<std::string>{"Zone_ID", "Active"}));
}

TEST(Parser, TaskQueries) {
  auto stmts = split_statements(test::read_file(test::fixture("tasks.sql")));
  ASSERT_EQ(stmts.size(), 2u);
  auto t1 = parse(stmts[0]);
  EXPECT_TRUE(t1.has_wildcard_projection);
  ASSERT_EQ(t1.predicates.size(), 1u);
  EXPECT_EQ(t1.predicates[0].op, "LIKE");
  auto t2 = parse(stmts[1]);
  EXPECT_EQ(t2.join_count, 1u);
  ASSERT_EQ(t2.predicates.size(), 2u);
  EXPECT_TRUE(t2.predicates[0].column.same_as(ColumnRef{"Tenants", "User_IDs"}));
  EXPECT_EQ(t2.text_of(t2.predicates[0].rhs), "'[[:<:]]'||u.User_ID||'[[:>:]]'");
}

TEST(Parser, CommaJoinAfterJoinChain) {
  auto s = parse("SELECT a.x FROM T1 a JOIN T2 b ON a.id = b.id, T3 c WHERE c.k = 1");
  EXPECT_EQ(s.tables_referenced, (std::vector<std::string>{"T1", "T2", "T3"}));
  EXPECT_EQ(s.join_count, 2u);
  for (const auto& c : s.columns_referenced) EXPECT_FALSE(iequals(c.column, "T3"));
}

TEST(Parser, GarbageIsOtherNotError) {
  auto s = parse("hello there, world");
  EXPECT_EQ(s.kind, StatementKind::Other);
  auto bad = parse("SELECT 'unterminated");
  EXPECT_TRUE(bad.diagnostic);
  EXPECT_EQ(bad.kind, StatementKind::Other);
}

TEST(Parser, FuzzedBytesNeverThrow) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 120), byte(0, 255);
  for (int i = 0; i < 2000; ++i) {
    std::string s(static_cast<std::size_t>(len(rng)), '\0');
    for (auto& c : s) c = static_cast<char>(byte(rng));
    EXPECT_NO_THROW({
      auto p = parse(s);
      (void)split_statements(s);
      if (!p.diagnostic) (void)render(p);
    });
  }
}

TEST(Render, RoundTripPreservesAnnotations) {
  StatementGen gen(20240601);
  for (int i = 0; i < 100; ++i) {
    std::string sql = gen.next();
    auto a = parse(sql, "g");
    ASSERT_FALSE(a.diagnostic) << sql;
    auto b = parse(render(a), "g");
    EXPECT_TRUE(same_annotations(a, b)) << sql << "\n=> " << render(a);
    EXPECT_EQ(render(a), render(b));
  }
}

TEST(Render, PaperFixturesRoundTrip) {
  for (const char* name : {"example1_insert.sql", "no_foreign_key.sql", "enumerated_types.sql",
                           "index_overuse_w1.sql", "tasks.sql", "globaleaks.sql"}) {
    for (const auto& raw : split_statements(test::read_file(test::fixture(name)), name)) {
      auto a = parse(raw);
      EXPECT_TRUE(same_annotations(a, parse(render(a)))) << raw.text;
    }
  }
}

TEST(Render, LineCommentStaysTerminated) {
  auto s = parse("SELECT a -- note\nFROM t");
  auto r = render(s);
  EXPECT_TRUE(same_annotations(s, parse(r))) << r;
}

TEST(Edits, RewriteShiftsSpans) {
  auto s = parse("SELECT * FROM t WHERE a = 1");
  std::size_t star = 0;
  while (s.tokens[star].text != "*") ++star;
  auto out = rewrite(s, {{Span{star, star + 1}, "a, b"}});
  EXPECT_EQ(render(out), "SELECT a, b FROM t WHERE a = 1");
  EXPECT_FALSE(out.has_wildcard_projection);
  auto edited = apply_edits(s, {{Span{star, star + 1}, "a, b"}});
  EXPECT_EQ(texts(edited, ClauseRole::Where), std::vector<std::string>{"a = 1"});
}

TEST(Edits, OverlappingEditsRejected) {
  auto s = parse("SELECT a FROM t");
  EXPECT_THROW(apply_edits(s, {{Span{0, 3}, "x"}, {Span{2, 4}, "y"}}), RenderError);
}

TEST(Edits, PartialClauseOverlapFailsToRender) {
  auto s = parse("SELECT a FROM t WHERE a = 1 AND b = 2");
  Span where = s.spans(ClauseRole::Where).front();
  // An edit straddling the WHERE keyword and part of the condition.
  auto edited = apply_edits(s, {{Span{where.begin - 2, where.begin + 1}, "WHERE z"}});
  EXPECT_THROW(render(edited), RenderError);
}

TEST(Edits, RemovedColumnDefinitionDisappears) {
  auto s = parse("CREATE TABLE t (a INT, b TEXT, c INT)");
  Span b = s.column_defs[1].span;
  std::size_t comma = b.begin;
  while (!s.tokens[comma - 1].is_punct(',')) --comma;
  auto out = rewrite(s, {{Span{comma - 1, b.end}, ""}});
  EXPECT_EQ(render(out), "CREATE TABLE t (a INT, c INT)");
  EXPECT_EQ(out.column_defs.size(), 2u);
}
