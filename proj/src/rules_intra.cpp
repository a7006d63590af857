// Context-free rules: each looks at one annotated statement.
#include "rules.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace sqlsmell::detail {

using SK = StatementKind;

Finding statement_finding(ApKind kind, const AnnotatedStatement& stmt, Phase phase,
                          std::string evidence) {
  Finding f;
  f.kind = kind;
  f.phase = phase;
  f.location.statement_id = stmt.source_id;
  f.location.ordinal = stmt.ordinal;
  if (stmt.target_table) f.location.table = *stmt.target_table;
  else if (stmt.tables_referenced.size() == 1) f.location.table = stmt.tables_referenced.front();
  f.evidence = std::move(evidence);
  return f;
}

std::vector<std::size_t> significant(const AnnotatedStatement& stmt, Span span) {
  std::vector<std::size_t> out;
  for (std::size_t i = span.begin; i < span.end && i < stmt.tokens.size(); ++i)
    if (!stmt.tokens[i].trivia()) out.push_back(i);
  return out;
}

std::string quote(std::string_view s) {
  std::string out = "'";
  out += s;
  return out + "'";
}

bool is_pattern_op(std::string_view op) {
  static const std::set<std::string, std::less<>> ops = {
      "LIKE", "NOT LIKE", "ILIKE", "NOT ILIKE", "REGEXP", "NOT REGEXP", "RLIKE", "NOT RLIKE",
      "SIMILAR TO", "~", "~*", "!~", "!~*"};
  return ops.count(op) > 0;
}

static bool is_regex_op(std::string_view op) {
  return op != "LIKE" && op != "NOT LIKE" && op != "ILIKE" && op != "NOT ILIKE";
}

bool pattern_has_wordboundary(std::string_view rhs) {
  for (const char* marker : {"[[:<:]]", "[[:>:]]", "\\b", "\\y", "\\m", "\\M", "%,", ",%"})
    if (rhs.find(marker) != std::string_view::npos) return true;
  return false;
}

std::vector<ColumnRef> concat_column_operands(const AnnotatedStatement& stmt) {
  auto sig = significant(stmt, Span{0, stmt.tokens.size()});
  const auto& toks = stmt.tokens;
  auto tk = [&](std::size_t k) -> const Token& { return toks[sig[k]]; };
  auto ident = [&](std::size_t k) { return k < sig.size() && tk(k).kind == TokenKind::Identifier; };
  std::vector<ColumnRef> out;
  auto add = [&](std::size_t first, std::size_t last) {
    ColumnRef ref;
    ref.column = unquote(tk(last).text);
    if (last >= first + 2) ref.table = stmt.resolve_qualifier(tk(last - 2).text);
    else if (stmt.tables_referenced.size() == 1) ref.table = stmt.tables_referenced.front();
    for (const auto& c : out)
      if (c.same_as(ref)) return;
    out.push_back(ref);
  };
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (!tk(k).is_op("||")) continue;
    // Left operand: chain ending right before the operator.
    if (k >= 1 && ident(k - 1)) {
      std::size_t first = k - 1;
      while (first >= 2 && tk(first - 1).is_punct('.') && ident(first - 2)) first -= 2;
      add(first, k - 1);
    }
    // Right operand: chain starting right after, not a function call.
    if (ident(k + 1)) {
      std::size_t last = k + 1;
      while (last + 2 < sig.size() && tk(last + 1).is_punct('.') && ident(last + 2)) last += 2;
      bool call = last + 1 < sig.size() && tk(last + 1).is_punct('(');
      if (!call) add(k + 1, last);
    }
  }
  return out;
}

namespace {

std::vector<Finding> none() { return {}; }

std::vector<Finding> mva_suspect(const AnnotatedStatement& s, const ApplicationContext&) {
  std::vector<Finding> out;
  for (const auto& p : s.predicates) {
    if (!is_pattern_op(p.op)) continue;
    std::string rhs = s.text_of(p.rhs);
    bool id_name = std::regex_search(p.column.column, std::regex("ids?$", std::regex::icase));
    bool boundary = pattern_has_wordboundary(rhs);
    if (!id_name && !boundary) continue;
    Finding f = statement_finding(ApKind::MultiValuedAttribute, s, Phase::IntraQuery,
                                  "pattern match " + p.column.display() + " " + p.op + " " + rhs +
                                      (boundary ? " searches for one element of a delimited list"
                                                : " on an identifier column (heuristic)"));
    f.location.table = p.column.table;
    f.location.column = p.column.column;
    f.confidence = boundary ? Confidence::Medium : Confidence::Low;
    bool dup = std::any_of(out.begin(), out.end(), [&](const Finding& g) {
      return iequals(g.location.column, f.location.column) && iequals(g.location.table, f.location.table);
    });
    if (!dup) out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> wildcard(const AnnotatedStatement& s, const ApplicationContext&) {
  if (!s.has_wildcard_projection) return none();
  std::string proj;
  for (const auto& sp : s.spans(ClauseRole::Projection)) proj += s.text_of(sp);
  return {statement_finding(ApKind::ColumnWildcardUsage, s, Phase::IntraQuery,
                            "projection uses a column wildcard: SELECT " + proj)};
}

std::vector<Finding> concat_nulls(const AnnotatedStatement& s, const ApplicationContext&) {
  auto cols = concat_column_operands(s);
  if (cols.empty()) return none();
  std::string names;
  for (const auto& c : cols) names += (names.empty() ? "" : ", ") + c.display();
  Finding f = statement_finding(ApKind::ConcatenateNulls, s, Phase::IntraQuery,
                                "|| over possibly NULL column(s) " + names +
                                    "; a NULL operand makes the whole expression NULL");
  f.location.table = cols.front().table;
  f.location.column = cols.front().column;
  return {f};
}

std::vector<Finding> ordering_by_rand(const AnnotatedStatement& s, const ApplicationContext&) {
  for (const auto& sp : s.spans(ClauseRole::OrderBy)) {
    auto sig = significant(s, sp);
    for (std::size_t k = 0; k + 1 < sig.size(); ++k) {
      const Token& t = s.tokens[sig[k]];
      if ((t.is_word("RAND") || t.is_word("RANDOM") || t.is_word("NEWID")) &&
          s.tokens[sig[k + 1]].is_punct('('))
        return {statement_finding(ApKind::OrderingByRand, s, Phase::IntraQuery,
                                  "ORDER BY " + s.text_of(sp) + " sorts the whole result randomly")};
    }
  }
  return none();
}

std::vector<Finding> pattern_matching(const AnnotatedStatement& s, const ApplicationContext&) {
  std::vector<Finding> out;
  for (const auto& p : s.predicates) {
    if (!is_pattern_op(p.op)) continue;
    std::string rhs = s.text_of(p.rhs);
    auto sig = significant(s, p.rhs);
    std::string first_literal;
    for (auto i : sig)
      if (s.tokens[i].is_string_literal()) {
        first_literal = string_literal_value(s.tokens[i].text);
        break;
      }
    bool leading = !first_literal.empty() && (first_literal[0] == '%' || first_literal[0] == '_');
    bool regexy = rhs.find("[[:") != std::string::npos || rhs.find("\\b") != std::string::npos;
    std::string why;
    if (is_regex_op(p.op)) why = "regular-expression match cannot use an index";
    else if (leading) why = "leading wildcard prevents index use";
    else if (regexy) why = "regex/POSIX class markers inside a LIKE pattern";
    else continue;
    Finding f = statement_finding(ApKind::PatternMatching, s, Phase::IntraQuery,
                                  p.column.display() + " " + p.op + " " + rhs + ": " + why);
    f.location.table = p.column.table;
    f.location.column = p.column.column;
    out.push_back(std::move(f));
    break;  // one per statement
  }
  return out;
}

std::vector<Finding> implicit_columns(const AnnotatedStatement& s, const ApplicationContext&) {
  if (s.has_clause(ClauseRole::ColumnList) || !s.target_table) return none();
  auto sig = significant(s, Span{0, s.tokens.size()});
  for (auto i : sig)
    if (s.tokens[i].is_word("DEFAULT") || s.tokens[i].is_word("SET")) {
      // INSERT ... DEFAULT VALUES / MySQL INSERT ... SET a = 1
      if (s.tokens[i].is_word("SET") || !s.has_clause(ClauseRole::Values)) return none();
    }
  return {statement_finding(ApKind::ImplicitColumns, s, Phase::IntraQuery,
                            "INSERT INTO " + *s.target_table +
                                " relies on the table's column order; no column list given")};
}

std::vector<Finding> distinct_and_join(const AnnotatedStatement& s, const ApplicationContext&) {
  if (!s.distinct_present || s.join_count < 1) return none();
  return {statement_finding(ApKind::DistinctAndJoin, s, Phase::IntraQuery,
                            "DISTINCT over a join of " + std::to_string(s.join_count + 1) +
                                " tables; duplicates are produced and then removed")};
}

std::vector<Finding> too_many_joins(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  if (s.join_count < ctx.config.join_threshold) return none();
  return {statement_finding(ApKind::TooManyJoins, s, Phase::IntraQuery,
                            std::to_string(s.join_count) + " joins (threshold " +
                                std::to_string(ctx.config.join_threshold) + ")")};
}

bool word_in_type(const std::string& type, std::initializer_list<const char*> words) {
  auto lexed = tokenize(type);
  for (const auto& t : lexed.tokens)
    for (const char* w : words)
      if (t.is_word(w)) return true;
  return false;
}

std::vector<Finding> rounding_errors(const AnnotatedStatement& s, const ApplicationContext&) {
  std::vector<Finding> out;
  for (const auto& c : s.column_defs) {
    if (!word_in_type(c.declared_type, {"FLOAT", "REAL", "DOUBLE", "FLOAT4", "FLOAT8"})) continue;
    Finding f = statement_finding(ApKind::RoundingErrors, s, Phase::IntraQuery,
                                  "column " + c.name + " declared " + c.declared_type +
                                      " stores an inexact binary fraction");
    f.location.column = c.name;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> generic_pk(const AnnotatedStatement& s, const ApplicationContext&) {
  for (const auto& c : s.constraints) {
    if (c.kind != ConstraintKind::PrimaryKey || c.columns.size() != 1) continue;
    if (!iequals(unquote(c.columns.front()), "id")) continue;
    Finding f = statement_finding(ApKind::GenericPrimaryKey, s, Phase::IntraQuery,
                                  "primary key column is named just '" + c.columns.front() + "'");
    f.location.column = c.columns.front();
    return {f};
  }
  return none();
}

std::vector<Finding> god_table(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  if (s.column_defs.size() < ctx.config.god_table_threshold) return none();
  return {statement_finding(ApKind::GodTable, s, Phase::IntraQuery,
                            "table declares " + std::to_string(s.column_defs.size()) +
                                " columns (threshold " +
                                std::to_string(ctx.config.god_table_threshold) + ")")};
}

bool external_storage_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), ::tolower);
  static const std::regex re("(^|_)(path|file|filename|filepath|url|uri)s?(_|$)|(path|url|uri|file)$");
  return std::regex_search(name, re);
}

std::vector<Finding> external_storage(const AnnotatedStatement& s, const ApplicationContext&) {
  std::vector<Finding> out;
  for (const auto& c : s.column_defs) {
    if (!external_storage_name(unquote(c.name)) || !textual_type(c.declared_type)) continue;
    Finding f = statement_finding(ApKind::ExternalDataStorage, s, Phase::IntraQuery,
                                  "column " + c.name + " (" + c.declared_type +
                                      ") appears to reference data stored outside the database "
                                      "(heuristic: name match)");
    f.location.column = c.name;
    f.confidence = Confidence::Low;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<DetectionRule> intra_rules() {
  const std::vector<SK> dml = {SK::Select, SK::Update, SK::Delete};
  const std::vector<SK> ddl = {SK::CreateTable, SK::AlterTable};
  return {
      {ApKind::MultiValuedAttribute, "mva-pattern", Phase::IntraQuery, dml, mva_suspect},
      {ApKind::GenericPrimaryKey, "generic-pk", Phase::IntraQuery, ddl, generic_pk},
      {ApKind::GodTable, "god-table", Phase::IntraQuery, {SK::CreateTable}, god_table},
      {ApKind::RoundingErrors, "float-column", Phase::IntraQuery, ddl, rounding_errors},
      {ApKind::ExternalDataStorage, "external-path-column", Phase::IntraQuery, ddl, external_storage},
      {ApKind::ColumnWildcardUsage, "select-star", Phase::IntraQuery, {SK::Select}, wildcard},
      {ApKind::ConcatenateNulls, "concat-nulls", Phase::IntraQuery,
       {SK::Select, SK::Insert, SK::Update, SK::Delete}, concat_nulls},
      {ApKind::OrderingByRand, "order-by-rand", Phase::IntraQuery, dml, ordering_by_rand},
      {ApKind::PatternMatching, "pattern-match", Phase::IntraQuery, dml, pattern_matching},
      {ApKind::ImplicitColumns, "insert-no-columns", Phase::IntraQuery, {SK::Insert}, implicit_columns},
      {ApKind::DistinctAndJoin, "distinct-join", Phase::IntraQuery, {SK::Select}, distinct_and_join},
      {ApKind::TooManyJoins, "too-many-joins", Phase::IntraQuery, dml, too_many_joins},
  };
}

}  // namespace sqlsmell::detail
