// ---------------------------------------------------------------------------
// parser.cpp
//
// Keyword-driven statement annotation. Works over the significant (non-trivia)
// tokens; every span stored on the statement maps back to indexes in the
// full token list.
// ---------------------------------------------------------------------------
#include "sqlsmell/frontend.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sqlsmell {

std::string_view to_string(StatementKind kind) {
  switch (kind) {
    case StatementKind::Select: return "select";
    case StatementKind::Insert: return "insert";
    case StatementKind::Update: return "update";
    case StatementKind::Delete: return "delete";
    case StatementKind::CreateTable: return "create-table";
    case StatementKind::AlterTable: return "alter-table";
    case StatementKind::CreateIndex: return "create-index";
    case StatementKind::DropX: return "drop";
    case StatementKind::Other: return "other";
  }
  return "other";
}

std::string_view to_string(ClauseRole role) {
  switch (role) {
    case ClauseRole::Projection: return "projection";
    case ClauseRole::From: return "from";
    case ClauseRole::Joins: return "joins";
    case ClauseRole::Where: return "where";
    case ClauseRole::GroupBy: return "group-by";
    case ClauseRole::Having: return "having";
    case ClauseRole::OrderBy: return "order-by";
    case ClauseRole::Limit: return "limit";
    case ClauseRole::Set: return "set";
    case ClauseRole::Values: return "values";
    case ClauseRole::ColumnList: return "column-list";
    case ClauseRole::ConstraintList: return "constraint-list";
    case ClauseRole::IndexColumns: return "index-columns";
  }
  return "?";
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::PrimaryKey: return "primary-key";
    case ConstraintKind::ForeignKey: return "foreign-key";
    case ConstraintKind::Check: return "check";
    case ConstraintKind::Unique: return "unique";
    case ConstraintKind::NotNull: return "not-null";
  }
  return "?";
}

bool ColumnRef::same_as(const ColumnRef& other) const {
  return iequals(unquote(table), unquote(other.table)) &&
         iequals(unquote(column), unquote(other.column));
}

std::string ColumnRef::display() const {
  return table.empty() ? column : table + "." + column;
}

bool AnnotatedStatement::has_clause(ClauseRole role) const {
  auto it = clauses.find(role);
  return it != clauses.end() && !it->second.empty();
}

const std::vector<Span>& AnnotatedStatement::spans(ClauseRole role) const {
  static const std::vector<Span> kEmpty;
  auto it = clauses.find(role);
  return it == clauses.end() ? kEmpty : it->second;
}

std::string AnnotatedStatement::text_of(Span span) const {
  std::string out;
  bool pending_space = false;
  for (std::size_t i = span.begin; i < span.end && i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.trivia()) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out += t.text;
  }
  return out;
}

std::string AnnotatedStatement::text() const { return text_of(Span{0, tokens.size()}); }

std::string AnnotatedStatement::resolve_qualifier(std::string_view qualifier) const {
  std::string q = canonical(qualifier);
  for (const auto& ref : table_refs)
    if (!ref.alias.empty() && canonical(ref.alias) == q) return ref.name;
  for (const auto& ref : table_refs)
    if (canonical(ref.name) == q) return ref.name;
  return unquote(qualifier);
}

bool AnnotatedStatement::references_table(std::string_view table) const {
  std::string t = canonical(table);
  return std::any_of(tables_referenced.begin(), tables_referenced.end(),
                     [&](const std::string& name) { return canonical(name) == t; });
}

namespace {

bool is_join_starter(const Token& t) {
  return t.is_word("JOIN") || t.is_word("INNER") || t.is_word("LEFT") || t.is_word("RIGHT") ||
         t.is_word("FULL") || t.is_word("CROSS") || t.is_word("NATURAL") ||
         t.is_word("STRAIGHT_JOIN");
}

bool is_name_token(const Token& t) { return t.kind == TokenKind::Identifier; }

bool is_comparison(const Token& t) {
  static const std::set<std::string, std::less<>> ops = {"=", "==", "<", ">", "<=",
                                                         ">=", "<>", "!=", "~", "~*",
                                                         "!~", "!~*"};
  return t.kind == TokenKind::Operator && ops.count(t.text);
}

class Parser {
 public:
  explicit Parser(AnnotatedStatement& stmt) : s_(stmt) {
    for (std::size_t i = 0; i < s_.tokens.size(); ++i)
      if (!s_.tokens[i].trivia()) sig_.push_back(i);
    depth_.resize(sig_.size());
    int d = 0;
    for (std::size_t k = 0; k < sig_.size(); ++k) {
      const Token& t = tok(k);
      if (t.is_punct(')')) d = std::max(0, d - 1);
      depth_[k] = d;
      if (t.is_punct('(')) ++d;
    }
  }

  void run() {
    classify();
    collect_tables_anywhere();
    switch (s_.kind) {
      case StatementKind::Select: parse_select(first_top_level("SELECT", 0)); break;
      case StatementKind::Insert: parse_insert(); break;
      case StatementKind::Update: parse_update(); break;
      case StatementKind::Delete: parse_delete(); break;
      case StatementKind::CreateTable: parse_create_table(); break;
      case StatementKind::AlterTable: parse_alter_table(); break;
      case StatementKind::CreateIndex: parse_create_index(); break;
      case StatementKind::DropX: parse_drop(); break;
      case StatementKind::Other: break;
    }
    if (s_.kind == StatementKind::Select || s_.kind == StatementKind::Insert ||
        s_.kind == StatementKind::Update || s_.kind == StatementKind::Delete)
      collect_columns();
    dedupe();
  }

 private:
  AnnotatedStatement& s_;
  std::vector<std::size_t> sig_;
  std::vector<int> depth_;

  std::size_t n() const { return sig_.size(); }
  const Token& tok(std::size_t k) const { return s_.tokens[sig_[k]]; }
  bool word(std::size_t k, std::string_view w) const { return k < n() && tok(k).is_word(w); }
  bool punct(std::size_t k, char c) const { return k < n() && tok(k).is_punct(c); }

  Span span(std::size_t kb, std::size_t ke) const {
    if (kb >= ke || kb >= n()) return Span{kb < n() ? sig_[kb] : s_.tokens.size(),
                                           kb < n() ? sig_[kb] : s_.tokens.size()};
    return Span{sig_[kb], sig_[ke - 1] + 1};
  }

  void add_clause(ClauseRole role, std::size_t kb, std::size_t ke) {
    if (kb < ke) s_.clauses[role].push_back(span(kb, ke));
  }

  std::string text(std::size_t kb, std::size_t ke) const { return s_.text_of(span(kb, ke)); }

  // Index of the ')' matching the '(' at k, or n() when unbalanced.
  std::size_t match_paren(std::size_t k) const {
    int d = 0;
    for (std::size_t j = k; j < n(); ++j) {
      if (tok(j).is_punct('(')) ++d;
      if (tok(j).is_punct(')') && --d == 0) return j;
    }
    return n();
  }

  std::size_t first_top_level(std::string_view w, std::size_t from) const {
    for (std::size_t k = from; k < n(); ++k)
      if (depth_[k] == 0 && tok(k).is_word(w)) return k;
    return n();
  }

  // Reads a possibly qualified name (a.b.c) at k. Returns the last component
  // and advances k.
  std::optional<std::string> read_name(std::size_t& k) const {
    if (k >= n() || !(is_name_token(tok(k)) || tok(k).kind == TokenKind::Keyword)) return {};
    if (tok(k).kind == TokenKind::Keyword && !tok(k).quoted) return {};
    std::string name = unquote(tok(k).text);
    ++k;
    while (punct(k, '.') && k + 1 < n() && is_name_token(tok(k + 1))) {
      name = unquote(tok(k + 1).text);
      k += 2;
    }
    return name;
  }

  void skip_words(std::size_t& k, std::initializer_list<std::string_view> words) const {
    bool advanced = true;
    while (advanced && k < n()) {
      advanced = false;
      for (auto w : words)
        if (word(k, w)) {
          ++k;
          advanced = true;
          break;
        }
    }
  }

  void classify() {
    std::size_t k = 0;
    while (punct(k, '(')) ++k;
    if (k >= n()) return;
    if (word(k, "SELECT") || word(k, "WITH")) {
      if (word(k, "WITH") && first_top_level("SELECT", k) == n()) return;
      s_.kind = StatementKind::Select;
    } else if (word(k, "INSERT")) {
      s_.kind = StatementKind::Insert;
    } else if (word(k, "UPDATE")) {
      s_.kind = StatementKind::Update;
    } else if (word(k, "DELETE")) {
      s_.kind = StatementKind::Delete;
    } else if (word(k, "CREATE")) {
      std::size_t j = k + 1;
      skip_words(j, {"OR", "REPLACE", "TEMP", "TEMPORARY", "GLOBAL", "LOCAL", "UNLOGGED",
                     "VIRTUAL", "UNIQUE", "CLUSTERED", "NONCLUSTERED", "FULLTEXT", "SPATIAL"});
      if (word(j, "TABLE"))
        s_.kind = StatementKind::CreateTable;
      else if (word(j, "INDEX"))
        s_.kind = StatementKind::CreateIndex;
    } else if (word(k, "ALTER") && word(k + 1, "TABLE")) {
      s_.kind = StatementKind::AlterTable;
    } else if (word(k, "DROP")) {
      s_.kind = StatementKind::DropX;
    }
  }

  void note_table(const std::string& name) {
    if (!name.empty()) s_.tables_referenced.push_back(name);
  }

  // Table names that follow FROM / JOIN / INTO / UPDATE anywhere, including
  // subqueries. Aliases are recorded for qualifier resolution.
  void collect_tables_anywhere() {
    for (std::size_t k = 0; k < n(); ++k) {
      const Token& t = tok(k);
      bool from_like = t.is_word("FROM") || t.is_word("JOIN") || t.is_word("STRAIGHT_JOIN");
      if (!from_like) continue;
      // FROM a, b, c
      std::size_t j = k + 1;
      while (j < n()) {
        if (punct(j, '(')) {
          // Derived table: skip it, then its alias.
          j = match_paren(j) + 1;
          if (word(j, "AS")) ++j;
          if (j < n() && is_name_token(tok(j))) ++j;
        } else {
          skip_words(j, {"ONLY", "LATERAL"});
          auto name = read_name(j);
          if (!name) break;
          TableRef ref{*name, {}};
          if (word(j, "AS")) ++j;
          if (j < n() && is_name_token(tok(j))) ref.alias = unquote(tok(j++).text);
          note_table(ref.name);
          s_.table_refs.push_back(ref);
        }
        if (!t.is_word("FROM") || !punct(j, ',')) break;
        ++j;
      }
    }
  }

  // ---- SELECT -----------------------------------------------------------

  static bool is_select_boundary(const Token& t) {
    return t.is_word("FROM") || t.is_word("WHERE") || t.is_word("GROUP") ||
           t.is_word("HAVING") || t.is_word("ORDER") || t.is_word("LIMIT") ||
           t.is_word("OFFSET") || t.is_word("UNION") || t.is_word("INTERSECT") ||
           t.is_word("EXCEPT") || t.is_word("WINDOW") || t.is_word("FETCH") ||
           t.is_word("FOR") || t.is_word("RETURNING");
  }

  std::size_t next_boundary(std::size_t from, int depth) const {
    for (std::size_t k = from; k < n(); ++k) {
      if (depth_[k] < depth) return k;
      if (depth_[k] == depth && is_select_boundary(tok(k))) return k;
    }
    return n();
  }

  void parse_select(std::size_t k) {
    if (k >= n()) return;
    const int d = depth_[k];
    std::size_t p = k + 1;
    if (word(p, "DISTINCT")) {
      s_.distinct_present = true;
      ++p;
      if (word(p, "ON") && punct(p + 1, '(')) p = match_paren(p + 1) + 1;
    } else if (word(p, "ALL")) {
      ++p;
    }
    std::size_t proj_end = next_boundary(p, d);
    add_clause(ClauseRole::Projection, p, proj_end);
    detect_wildcard(p, proj_end, d);

    std::size_t k2 = proj_end;
    while (k2 < n() && depth_[k2] == d) {
      const Token& t = tok(k2);
      if (t.is_word("UNION") || t.is_word("INTERSECT") || t.is_word("EXCEPT")) break;
      std::size_t body = k2 + 1;
      ClauseRole role;
      if (t.is_word("FROM")) {
        std::size_t end = next_boundary(body, d);
        parse_from_region(body, end, d);
        k2 = end;
        continue;
      } else if (t.is_word("WHERE")) {
        role = ClauseRole::Where;
      } else if (t.is_word("GROUP") && word(body, "BY")) {
        role = ClauseRole::GroupBy;
        ++body;
      } else if (t.is_word("HAVING")) {
        role = ClauseRole::Having;
      } else if (t.is_word("ORDER") && word(body, "BY")) {
        role = ClauseRole::OrderBy;
        ++body;
      } else if (t.is_word("LIMIT") || t.is_word("OFFSET") || t.is_word("FETCH")) {
        role = ClauseRole::Limit;
        // LIMIT .. OFFSET .. is one clause.
        std::size_t end = body;
        while (end < n() && depth_[end] >= d &&
               !(depth_[end] == d && (tok(end).is_word("UNION") || tok(end).is_word("FOR"))))
          ++end;
        add_clause(role, body, end);
        k2 = end;
        continue;
      } else {
        ++k2;
        continue;
      }
      std::size_t end = next_boundary(body, d);
      add_clause(role, body, end);
      if (role == ClauseRole::Where) extract_predicates(body, end, ClauseRole::Where);
      k2 = end;
    }
  }

  void detect_wildcard(std::size_t b, std::size_t e, int d) {
    for (std::size_t k = b; k < e; ++k) {
      if (depth_[k] != d || !tok(k).is_op("*")) continue;
      bool left_ok = k == b || punct(k - 1, ',') || punct(k - 1, '.');
      bool right_ok = k + 1 == e || punct(k + 1, ',');
      if (left_ok && right_ok) s_.has_wildcard_projection = true;
    }
  }

  void parse_from_region(std::size_t b, std::size_t e, int d) {
    std::size_t join_start = e;
    std::size_t commas = 0;
    std::size_t joins = 0;
    for (std::size_t k = b; k < e; ++k) {
      if (depth_[k] != d) continue;
      if (punct(k, ',')) ++commas;
      if (tok(k).is_word("JOIN") || tok(k).is_word("STRAIGHT_JOIN")) ++joins;
      if (join_start == e && is_join_starter(tok(k))) join_start = k;
    }
    add_clause(ClauseRole::From, b, join_start);
    add_clause(ClauseRole::Joins, join_start, e);
    s_.join_count += joins + commas;

    // ON conditions inside the joins region.
    for (std::size_t k = join_start; k < e; ++k) {
      if (depth_[k] != d || !tok(k).is_word("ON")) continue;
      std::size_t end = k + 1;
      while (end < e && !(depth_[end] == d && (is_join_starter(tok(end)) || punct(end, ','))))
        ++end;
      extract_predicates(k + 1, end, ClauseRole::Joins);
    }
    // "JOIN b ON .., c": comma-joined tables after the join chain.
    for (std::size_t k = join_start; k < e; ++k) {
      if (depth_[k] != d || !punct(k, ',')) continue;
      std::size_t j = k + 1;
      auto name = read_name(j);
      if (!name) continue;
      TableRef ref{*name, {}};
      if (word(j, "AS")) ++j;
      if (j < n() && is_name_token(tok(j))) ref.alias = unquote(tok(j).text);
      note_table(ref.name);
      s_.table_refs.push_back(ref);
    }
  }

  // ---- predicates ---------------------------------------------------------

  std::optional<ColumnRef> column_at(std::size_t b, std::size_t e) const {
    // name | qual.name | schema.qual.name
    if (b >= e || !is_name_token(tok(b))) return {};
    std::vector<std::string> parts{unquote(tok(b).text)};
    std::size_t k = b + 1;
    while (k + 1 < e + 1 && punct(k, '.') && k + 1 < e && is_name_token(tok(k + 1))) {
      parts.push_back(unquote(tok(k + 1).text));
      k += 2;
    }
    if (k != e) return {};
    ColumnRef ref;
    ref.column = parts.back();
    if (parts.size() >= 2)
      ref.table = s_.resolve_qualifier(parts[parts.size() - 2]);
    else
      ref.table = sole_table();
    return ref;
  }

  std::string sole_table() const {
    std::set<std::string> names;
    for (const auto& t : s_.tables_referenced) names.insert(canonical(t));
    if (names.size() == 1) return s_.tables_referenced.front();
    if (s_.target_table && names.empty()) return *s_.target_table;
    return {};
  }

  void extract_predicates(std::size_t b, std::size_t e, ClauseRole clause) {
    if (b >= e) return;
    const int d = depth_[b];
    // Split into conjuncts at depth d on AND / OR, keeping BETWEEN x AND y.
    std::size_t start = b;
    bool in_between = false;
    auto finish = [&](std::size_t end) {
      if (start < end) one_predicate(start, end, clause);
    };
    for (std::size_t k = b; k < e; ++k) {
      if (depth_[k] != d) continue;
      if (tok(k).is_word("BETWEEN")) in_between = true;
      if (tok(k).is_word("AND") && in_between) {
        in_between = false;
        continue;
      }
      if (tok(k).is_word("AND") || tok(k).is_word("OR")) {
        finish(k);
        start = k + 1;
      }
    }
    finish(e);
  }

  void one_predicate(std::size_t b, std::size_t e, ClauseRole clause) {
    const int d = depth_[b];
    std::size_t lead = b;
    while (lead < e && tok(lead).is_word("NOT")) ++lead;
    // A parenthesized group: recurse unless it is a subquery.
    if (punct(lead, '(') && match_paren(lead) + 1 == e) {
      if (!word(lead + 1, "SELECT")) extract_predicates(lead + 1, e - 1, clause);
      return;
    }
    for (std::size_t k = lead; k < e; ++k) {
      if (depth_[k] != d) continue;
      const Token& t = tok(k);
      std::string op;
      std::size_t rhs = k + 1;
      if (is_comparison(t)) {
        op = t.text;
      } else if (t.is_word("LIKE") || t.is_word("ILIKE") || t.is_word("REGEXP") ||
                 t.is_word("RLIKE") || t.is_word("IN") || t.is_word("BETWEEN") ||
                 t.is_word("IS") || t.is_word("GLOB") || t.is_word("MATCH")) {
        op = canonical(t.text);
        std::transform(op.begin(), op.end(), op.begin(), ::toupper);
        if (k > lead && tok(k - 1).is_word("NOT")) op = "NOT " + op;
      } else if (t.is_word("SIMILAR") && word(k + 1, "TO")) {
        op = "SIMILAR TO";
        rhs = k + 2;
      } else {
        continue;
      }
      std::size_t lhs_end = k;
      if (op.rfind("NOT ", 0) == 0) --lhs_end;
      auto lhs = column_at(lead, lhs_end);
      auto rcol = column_at(rhs, e);
      bool rhs_literal = rhs + 1 == e && tok(rhs).kind == TokenKind::Literal;
      if (!lhs && rcol && lhs_end == lead + 1 && tok(lead).kind == TokenKind::Literal &&
          is_comparison(t)) {
        // 'x' = col
        Predicate p{*rcol, op, span(b, e), span(lead, lhs_end), std::nullopt, true, clause};
        s_.predicates.push_back(std::move(p));
        return;
      }
      if (!lhs) return;
      Predicate p{*lhs, op, span(b, e), span(rhs, e), rcol, rhs_literal, clause};
      s_.predicates.push_back(std::move(p));
      return;
    }
  }

  // ---- INSERT / UPDATE / DELETE --------------------------------------------

  void parse_insert() {
    std::size_t k = 1;
    if (word(k, "OR")) k += 2;
    skip_words(k, {"IGNORE", "LOW_PRIORITY", "HIGH_PRIORITY", "DELAYED"});
    if (word(k, "INTO")) ++k;
    auto name = read_name(k);
    if (!name) return;
    s_.target_table = *name;
    note_table(*name);
    if (word(k, "AS") && k + 1 < n() && is_name_token(tok(k + 1))) k += 2;
    if (punct(k, '(') && !word(k + 1, "SELECT")) {
      std::size_t close = match_paren(k);
      add_clause(ClauseRole::ColumnList, k + 1, close);
      k = close + 1;
    }
    if (word(k, "VALUES") || word(k, "VALUE")) {
      add_clause(ClauseRole::Values, k + 1, n());
    } else if (k < n()) {
      std::size_t sel = k;
      while (punct(sel, '(')) ++sel;
      add_clause(ClauseRole::Values, k, n());
      if (word(sel, "SELECT")) parse_nested_select_facts(sel);
    }
  }

  // INSERT ... SELECT: predicates of the embedded query.
  void parse_nested_select_facts(std::size_t sel) {
    const int d = depth_[sel];
    std::size_t w = sel;
    while (w < n() && !(depth_[w] == d && tok(w).is_word("WHERE"))) ++w;
    if (w < n()) extract_predicates(w + 1, next_boundary(w + 1, d), ClauseRole::Values);
  }

  void parse_update() {
    std::size_t k = 1;
    skip_words(k, {"ONLY", "LOW_PRIORITY", "IGNORE"});
    auto name = read_name(k);
    if (!name) return;
    s_.target_table = *name;
    if (std::none_of(s_.table_refs.begin(), s_.table_refs.end(),
                     [&](const TableRef& r) { return iequals(r.name, *name); })) {
      TableRef ref{*name, {}};
      if (word(k, "AS")) ++k;
      if (k < n() && is_name_token(tok(k))) ref.alias = unquote(tok(k++).text);
      s_.table_refs.insert(s_.table_refs.begin(), ref);
      s_.tables_referenced.insert(s_.tables_referenced.begin(), *name);
    }
    std::size_t set = first_top_level("SET", k);
    if (set == n()) return;
    std::size_t end = set + 1;
    while (end < n() && !(depth_[end] == 0 && (tok(end).is_word("WHERE") ||
                                               tok(end).is_word("FROM") ||
                                               tok(end).is_word("RETURNING") ||
                                               tok(end).is_word("ORDER") ||
                                               tok(end).is_word("LIMIT"))))
      ++end;
    add_clause(ClauseRole::Set, set + 1, end);
    parse_tail(end);
  }

  void parse_delete() {
    std::size_t k = 1;
    skip_words(k, {"LOW_PRIORITY", "QUICK", "IGNORE"});
    if (word(k, "FROM")) ++k;
    skip_words(k, {"ONLY"});
    auto name = read_name(k);
    if (!name) return;
    s_.target_table = *name;
    std::size_t end = k;
    while (end < n() && !(depth_[end] == 0 && (tok(end).is_word("WHERE") ||
                                               tok(end).is_word("USING") ||
                                               tok(end).is_word("RETURNING") ||
                                               tok(end).is_word("ORDER") ||
                                               tok(end).is_word("LIMIT"))))
      ++end;
    parse_tail(end);
  }

  // WHERE / ORDER BY / LIMIT after UPDATE ... SET or DELETE FROM t.
  void parse_tail(std::size_t k) {
    while (k < n()) {
      const Token& t = tok(k);
      if (depth_[k] != 0) {
        ++k;
        continue;
      }
      if (t.is_word("FROM") || t.is_word("USING")) {
        std::size_t end = next_boundary(k + 1, 0);
        parse_from_region(k + 1, end, 0);
        k = end;
      } else if (t.is_word("WHERE")) {
        std::size_t end = next_boundary(k + 1, 0);
        add_clause(ClauseRole::Where, k + 1, end);
        extract_predicates(k + 1, end, ClauseRole::Where);
        k = end;
      } else if (t.is_word("ORDER") && word(k + 1, "BY")) {
        std::size_t end = next_boundary(k + 2, 0);
        add_clause(ClauseRole::OrderBy, k + 2, end);
        k = end;
      } else if (t.is_word("LIMIT")) {
        add_clause(ClauseRole::Limit, k + 1, n());
        k = n();
      } else {
        ++k;
      }
    }
  }

  // ---- column references ---------------------------------------------------

  void collect_columns() {
    static const ClauseRole roles[] = {ClauseRole::Projection, ClauseRole::Where,
                                       ClauseRole::Joins,      ClauseRole::GroupBy,
                                       ClauseRole::Having,     ClauseRole::OrderBy,
                                       ClauseRole::Set,        ClauseRole::ColumnList,
                                       ClauseRole::Values};
    // Map token index -> sig index.
    std::vector<std::size_t> sig_of(s_.tokens.size(), n());
    for (std::size_t k = 0; k < n(); ++k) sig_of[sig_[k]] = k;

    for (ClauseRole role : roles) {
      for (const Span& sp : s_.spans(role)) {
        std::size_t b = sp.begin < sig_of.size() ? sig_of[sp.begin] : n();
        std::size_t e = sp.end > 0 && sp.end - 1 < sig_of.size() ? sig_of[sp.end - 1] + 1 : b;
        collect_columns_in(b, e, role);
      }
    }
  }

  void collect_columns_in(std::size_t b, std::size_t e, ClauseRole role) {
    for (std::size_t k = b; k < e; ++k) {
      if (!is_name_token(tok(k))) continue;
      if (k > b && punct(k - 1, '.')) continue;  // tail of a chain already handled
      // In a join region table names follow JOIN; only ON/USING parts hold columns.
      if (role == ClauseRole::Joins && k > b &&
          (tok(k - 1).is_word("JOIN") || tok(k - 1).is_word("AS") ||
           (is_name_token(tok(k - 1)) && !punct(k - 1, '.'))))
        continue;
      if (k > b && tok(k - 1).is_word("AS")) continue;
      if (role == ClauseRole::Joins && k > b && punct(k - 1, ',') && depth_[k] == depth_[b])
        continue;
      if (role == ClauseRole::Projection && k > b &&
          (is_name_token(tok(k - 1)) || tok(k - 1).kind == TokenKind::Literal ||
           tok(k - 1).is_punct(')')))
        continue;  // implicit alias
      std::size_t j = k + 1;
      while (punct(j, '.') && j + 1 < e && (is_name_token(tok(j + 1)) || tok(j + 1).is_op("*")))
        j += 2;
      if (punct(j, '(')) continue;  // function call
      if (j - 1 < n() && tok(j - 1).is_op("*")) continue;  // t.*
      if (role == ClauseRole::Joins && k > 0 && tok(k - 1).is_word("JOIN")) continue;
      auto ref = column_at(k, j);
      if (ref) s_.columns_referenced.push_back(*ref);
      k = j - 1;
    }
  }

  // ---- DDL ------------------------------------------------------------------

  static bool is_column_constraint_start(const Token& t) {
    return t.is_word("NOT") || t.is_word("NULL") || t.is_word("PRIMARY") ||
           t.is_word("REFERENCES") || t.is_word("CHECK") || t.is_word("UNIQUE") ||
           t.is_word("DEFAULT") || t.is_word("CONSTRAINT") || t.is_word("COLLATE") ||
           t.is_word("GENERATED") || t.is_word("AUTO_INCREMENT") ||
           t.is_word("AUTOINCREMENT") || t.is_word("IDENTITY") || t.is_word("COMMENT") ||
           t.is_word("ON");
  }

  static bool is_table_constraint_start(const Token& t) {
    return t.is_word("CONSTRAINT") || t.is_word("PRIMARY") || t.is_word("FOREIGN") ||
           t.is_word("UNIQUE") || t.is_word("CHECK") || t.is_word("KEY") ||
           t.is_word("INDEX") || t.is_word("FULLTEXT") || t.is_word("EXCLUDE");
  }

  std::vector<std::string> name_list(std::size_t open) const {
    std::vector<std::string> out;
    std::size_t close = match_paren(open);
    bool expect = true;
    for (std::size_t k = open + 1; k < close; ++k) {
      if (depth_[k] != depth_[open] + 1) continue;
      if (punct(k, ',')) {
        expect = true;
        continue;
      }
      if (expect && is_name_token(tok(k))) out.push_back(unquote(tok(k).text));
      expect = false;
    }
    return out;
  }

  // Column constraints between kb and ke for column `col`.
  void parse_column_constraints(std::size_t kb, std::size_t ke, ColumnDecl& col) {
    std::optional<std::string> cname;
    std::size_t cstart = kb;
    for (std::size_t k = kb; k < ke;) {
      const Token& t = tok(k);
      if (t.is_word("CONSTRAINT")) {
        cstart = k;
        cname = k + 1 < ke ? std::optional(unquote(tok(k + 1).text)) : std::nullopt;
        k += 2;
        continue;
      }
      if (!(k > 0 && tok(k - 1).is_word("CONSTRAINT")) && !(cname && cstart + 2 == k))
        cstart = k;
      ConstraintDecl c;
      c.name = cname;
      c.columns = {col.name};
      c.inline_decl = true;
      std::size_t next = k + 1;
      if (t.is_word("NOT") && word(k + 1, "NULL")) {
        c.kind = ConstraintKind::NotNull;
        col.nullable = false;
        next = k + 2;
      } else if (t.is_word("PRIMARY") && word(k + 1, "KEY")) {
        c.kind = ConstraintKind::PrimaryKey;
        col.nullable = false;
        next = k + 2;
        skip_words(next, {"ASC", "DESC", "AUTOINCREMENT", "AUTO_INCREMENT"});
      } else if (t.is_word("UNIQUE")) {
        c.kind = ConstraintKind::Unique;
        if (word(next, "KEY")) ++next;
      } else if (t.is_word("REFERENCES")) {
        c.kind = ConstraintKind::ForeignKey;
        std::size_t j = k + 1;
        auto table = read_name(j);
        ColumnRef target{table.value_or(""), ""};
        if (punct(j, '(')) {
          auto cols = name_list(j);
          if (!cols.empty()) target.column = cols.front();
          j = match_paren(j) + 1;
        }
        c.target = target;
        next = skip_referential_actions(j, ke);
      } else if (t.is_word("CHECK") && punct(k + 1, '(')) {
        c.kind = ConstraintKind::Check;
        std::size_t close = match_paren(k + 1);
        c.expression_text = text(k + 2, close);
        next = close + 1;
      } else {
        // DEFAULT expr, COLLATE x, etc.: skip to the next recognizable start.
        if (t.is_word("DEFAULT") || t.is_word("COLLATE") || t.is_word("COMMENT")) {
          next = k + 1;
          if (punct(next, '('))
            next = match_paren(next) + 1;
          else if (next < ke)
            ++next;
          // DEFAULT -1, DEFAULT now() etc.
          while (next < ke && !is_column_constraint_start(tok(next))) {
            if (punct(next, '('))
              next = match_paren(next) + 1;
            else
              ++next;
          }
        }
        cname.reset();
        k = next;
        continue;
      }
      c.span = span(cstart, std::min(next, ke));
      s_.constraints.push_back(std::move(c));
      cname.reset();
      k = next;
    }
  }

  std::size_t skip_referential_actions(std::size_t j, std::size_t ke) const {
    while (j < ke) {
      if (word(j, "ON") && (word(j + 1, "DELETE") || word(j + 1, "UPDATE"))) {
        j += 2;
        if (word(j, "SET") || word(j, "NO")) j += 2;
        else ++j;
      } else if (word(j, "MATCH") || word(j, "DEFERRABLE") || word(j, "INITIALLY")) {
        j += word(j, "DEFERRABLE") ? 1 : 2;
      } else {
        break;
      }
    }
    return j;
  }

  ColumnDecl parse_column_def(std::size_t kb, std::size_t ke) {
    ColumnDecl col;
    col.name = unquote(tok(kb).text);
    col.span = span(kb, ke);
    std::size_t k = kb + 1;
    std::size_t type_end = k;
    while (type_end < ke) {
      const Token& t = tok(type_end);
      if (punct(type_end, '(')) {
        type_end = match_paren(type_end) + 1;
        continue;
      }
      if ((t.is_word("WITH") || t.is_word("WITHOUT")) && word(type_end + 1, "TIME")) {
        type_end += 3;
        continue;
      }
      if (is_column_constraint_start(t)) break;
      ++type_end;
    }
    col.declared_type = text(k, std::min(type_end, ke));
    parse_column_constraints(type_end, ke, col);
    s_.column_defs.push_back(col);
    s_.columns_referenced.push_back(ColumnRef{s_.target_table.value_or(""), col.name});
    return col;
  }

  void parse_table_constraint(std::size_t kb, std::size_t ke) {
    ConstraintDecl c;
    std::size_t k = kb;
    if (word(k, "CONSTRAINT")) {
      if (k + 1 < ke) c.name = unquote(tok(k + 1).text);
      k += 2;
    }
    auto after_cols = [&](std::size_t j) {
      while (j < ke && !punct(j, '(')) ++j;
      if (j < ke) c.columns = name_list(j);
      return j < ke ? match_paren(j) + 1 : ke;
    };
    if (word(k, "PRIMARY")) {
      c.kind = ConstraintKind::PrimaryKey;
      after_cols(k);
    } else if (word(k, "FOREIGN")) {
      c.kind = ConstraintKind::ForeignKey;
      std::size_t j = after_cols(k);
      if (word(j, "REFERENCES")) {
        ++j;
        auto table = read_name(j);
        ColumnRef target{table.value_or(""), ""};
        if (punct(j, '(')) {
          auto cols = name_list(j);
          if (!cols.empty()) target.column = cols.front();
        }
        c.target = target;
      } else {
        c.target = ColumnRef{};
      }
    } else if (word(k, "UNIQUE")) {
      c.kind = ConstraintKind::Unique;
      after_cols(k);
    } else if (word(k, "CHECK") && punct(k + 1, '(')) {
      c.kind = ConstraintKind::Check;
      std::size_t close = match_paren(k + 1);
      c.expression_text = text(k + 2, std::min(close, ke));
    } else {
      // KEY / INDEX / FULLTEXT: MySQL inline index; not a constraint.
      return;
    }
    c.span = span(kb, ke);
    s_.constraints.push_back(std::move(c));
  }

  // Splits a parenthesized element list into depth-(d+1) comma items.
  std::vector<std::pair<std::size_t, std::size_t>> items(std::size_t open) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t close = match_paren(open);
    std::size_t start = open + 1;
    for (std::size_t k = open + 1; k <= close && k <= n(); ++k) {
      if (k == close || k == n() || (depth_[k] == depth_[open] + 1 && punct(k, ','))) {
        if (start < k) out.emplace_back(start, k);
        start = k + 1;
      }
    }
    return out;
  }

  void parse_create_table() {
    std::size_t k = first_top_level("TABLE", 0) + 1;
    if (word(k, "IF")) k += 3;  // IF NOT EXISTS
    auto name = read_name(k);
    if (!name) return;
    s_.target_table = *name;
    note_table(*name);
    if (!punct(k, '(')) return;  // CREATE TABLE x AS SELECT ...
    for (auto [b, e] : items(k)) {
      if (is_table_constraint_start(tok(b))) {
        add_clause(ClauseRole::ConstraintList, b, e);
        parse_table_constraint(b, e);
      } else if (is_name_token(tok(b)) || tok(b).kind == TokenKind::Keyword) {
        add_clause(ClauseRole::ColumnList, b, e);
        parse_column_def(b, e);
      }
    }
  }

  void parse_alter_table() {
    std::size_t k = 2;
    if (word(k, "IF")) k += 2;
    skip_words(k, {"ONLY"});
    auto name = read_name(k);
    if (!name) return;
    s_.target_table = *name;
    note_table(*name);
    // Comma-separated actions at depth 0.
    std::size_t start = k;
    for (std::size_t j = k; j <= n(); ++j) {
      if (j == n() || (depth_[j] == 0 && punct(j, ','))) {
        if (start < j) parse_alter_action(start, j);
        start = j + 1;
      }
    }
  }

  void parse_alter_action(std::size_t b, std::size_t e) {
    if (word(b, "ADD")) {
      std::size_t k = b + 1;
      if (k < e && is_table_constraint_start(tok(k)) && !word(k, "KEY") && !word(k, "INDEX")) {
        add_clause(ClauseRole::ConstraintList, k, e);
        parse_table_constraint(k, e);
        return;
      }
      if (word(k, "COLUMN")) ++k;
      if (word(k, "IF")) k += 3;
      if (k < e && (is_name_token(tok(k)) || tok(k).kind == TokenKind::Keyword)) {
        add_clause(ClauseRole::ColumnList, k, e);
        parse_column_def(k, e);
      }
    } else if (word(b, "DROP")) {
      std::size_t k = b + 1;
      if (word(k, "CONSTRAINT")) {
        ++k;
        if (word(k, "IF")) k += 2;
        if (k < e) s_.dropped_constraints.push_back(unquote(tok(k).text));
        return;
      }
      if (word(k, "PRIMARY") || word(k, "FOREIGN") || word(k, "INDEX") || word(k, "KEY")) return;
      if (word(k, "COLUMN")) ++k;
      if (word(k, "IF")) k += 2;
      if (k < e && is_name_token(tok(k))) {
        s_.dropped_columns.push_back(unquote(tok(k).text));
        s_.columns_referenced.push_back(ColumnRef{*s_.target_table, unquote(tok(k).text)});
      }
    }
  }

  void parse_create_index() {
    std::size_t k = 1;
    while (k < n() && !word(k, "INDEX")) {
      if (word(k, "UNIQUE")) s_.unique_index = true;
      ++k;
    }
    ++k;
    skip_words(k, {"CONCURRENTLY"});
    if (word(k, "IF")) k += 3;
    if (k < n() && is_name_token(tok(k))) {
      std::size_t j = k;
      s_.index_name = read_name(j);
      k = j;
    }
    if (word(k, "ON")) {
      ++k;
      skip_words(k, {"ONLY"});
      auto table = read_name(k);
      if (table) {
        s_.target_table = *table;
        note_table(*table);
      }
    }
    if (word(k, "USING")) k += 2;
    if (!punct(k, '(')) return;
    std::size_t close = match_paren(k);
    add_clause(ClauseRole::IndexColumns, k + 1, close);
    for (auto [b, e] : items(k)) {
      for (std::size_t j = b; j < e; ++j)
        if (is_name_token(tok(j)) && !punct(j + 1, '(')) {
          s_.index_columns.push_back(unquote(tok(j).text));
          break;
        }
    }
    for (const auto& c : s_.index_columns)
      s_.columns_referenced.push_back(ColumnRef{s_.target_table.value_or(""), c});
  }

  void parse_drop() {
    std::size_t k = 1;
    bool table = word(k, "TABLE");
    while (k < n() && !is_name_token(tok(k))) ++k;
    if (k < n() && table) {
      auto name = read_name(k);
      if (name) {
        s_.target_table = *name;
        note_table(*name);
      }
    }
  }

  void dedupe() {
    std::vector<std::string> tables;
    std::set<std::string> seen;
    for (auto& t : s_.tables_referenced)
      if (seen.insert(canonical(t)).second) tables.push_back(t);
    s_.tables_referenced = std::move(tables);

    std::vector<ColumnRef> cols;
    std::set<std::pair<std::string, std::string>> seen_cols;
    for (auto& c : s_.columns_referenced)
      if (seen_cols.insert({canonical(c.table), canonical(c.column)}).second) cols.push_back(c);
    s_.columns_referenced = std::move(cols);
  }
};

}  // namespace

AnnotatedStatement parse(const RawStatement& raw) {
  AnnotatedStatement stmt;
  stmt.source_id = raw.source_id;
  auto lexed = tokenize(raw.text);
  if (!lexed.ok) {
    stmt.kind = StatementKind::Other;
    stmt.diagnostic = true;
    stmt.tokens = {Token{TokenKind::Opaque, raw.text, false}};
    return stmt;
  }
  stmt.tokens = std::move(lexed.tokens);
  // Trailing terminator is permitted; keep it out of clause spans.
  while (!stmt.tokens.empty() &&
         (stmt.tokens.back().trivia() || stmt.tokens.back().is_punct(';'))) {
    if (stmt.tokens.back().kind == TokenKind::Comment) break;
    stmt.tokens.pop_back();
  }
  Parser(stmt).run();
  return stmt;
}

AnnotatedStatement parse(std::string_view text, std::string_view source_id) {
  return parse(RawStatement{std::string(text), std::string(source_id)});
}

}  // namespace sqlsmell
