// Built-in repair rules: automated rewrites for the kinds with an unambiguous
// fix, textual guidance for everything.
#include "repair_rules.hpp"

#include "rules.hpp"
#include "sqlsmell/repair.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sqlsmell::detail {

namespace {

using detail::significant;

std::string sql_string(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Name as written in the schema, falling back to the finding's spelling.
std::string table_name(const ApplicationContext& ctx, std::string_view table) {
  if (const TableSchema* t = ctx.table(table)) return t->name;
  return std::string(table);
}

std::string column_name(const ApplicationContext& ctx, std::string_view table,
                        std::string_view column) {
  if (const TableSchema* t = ctx.table(table))
    if (const ColumnDecl* c = t->column(column)) return c->name;
  return std::string(column);
}

std::string type_or(const std::string& declared, std::string_view fallback) {
  return declared.empty() ? std::string(fallback) : declared;
}

// A table name not yet taken in the schema.
std::string fresh_table(const ApplicationContext& ctx, std::string base) {
  if (!ctx.table(base)) return base;
  for (int i = 2;; ++i) {
    std::string name = base + "_" + std::to_string(i);
    if (!ctx.table(name)) return name;
  }
}

std::string fresh_id(const Finding& f, std::size_t n) {
  std::string anchor = !f.location.statement_id.empty() ? f.location.statement_id
                                                       : "table:" + f.location.table;
  return anchor + "#new" + std::to_string(n);
}

StatementTransformation create(const Finding& f, std::size_t n, std::string edit,
                               std::string sql) {
  return {TransformOp::CreateNew, fresh_id(f, n), std::move(edit), std::move(sql)};
}

StatementTransformation rewritten(const AnnotatedStatement& s, std::vector<TokenEdit> edits,
                                  std::string edit) {
  AnnotatedStatement out = rewrite(s, std::move(edits));
  return {TransformOp::RewriteExisting, s.source_id, std::move(edit), render(out)};
}

const AnnotatedStatement* finding_statement(const RepairInput& in) {
  for (const auto* s : in.to_transform)
    if (s->source_id == in.finding.location.statement_id) return s;
  return nullptr;
}

// VALUES (..), (..): the value spans of each tuple. Empty when the clause is
// not a plain tuple list.
std::vector<std::vector<Span>> value_tuples(const AnnotatedStatement& s) {
  std::vector<std::vector<Span>> out;
  const auto& spans = s.spans(ClauseRole::Values);
  if (spans.size() != 1) return {};
  auto sig = significant(s, spans.front());
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    const Token& t = s.tokens[sig[k]];
    if (t.is_punct('(')) {
      if (depth++ == 0) {
        out.emplace_back();
        start = k + 1;
      }
    } else if (t.is_punct(')')) {
      if (--depth == 0) {
        if (start < k) out.back().push_back(Span{sig[start], sig[k - 1] + 1});
      }
    } else if (depth == 1 && t.is_punct(',')) {
      if (start < k) out.back().push_back(Span{sig[start], sig[k - 1] + 1});
      start = k + 1;
    } else if (depth == 0 && !t.is_punct(',')) {
      // ON CONFLICT, RETURNING, a SELECT, ...
      return {};
    }
  }
  return out;
}

// Names in an INSERT column list.
std::vector<std::string> insert_columns(const AnnotatedStatement& s) {
  std::vector<std::string> out;
  for (const auto& sp : s.spans(ClauseRole::ColumnList))
    for (std::size_t i : significant(s, sp))
      if (!s.tokens[i].is_punct(',')) out.push_back(unquote(s.tokens[i].text));
  return out;
}

// Token index of the VALUES keyword of an INSERT.
std::optional<std::size_t> values_keyword(const AnnotatedStatement& s) {
  const auto& spans = s.spans(ClauseRole::Values);
  if (spans.size() != 1) return std::nullopt;
  for (std::size_t i = spans.front().begin; i-- > 0;) {
    if (s.tokens[i].trivia()) continue;
    if (s.tokens[i].is_word("VALUES") || s.tokens[i].is_word("VALUE")) return i;
    return std::nullopt;
  }
  return std::nullopt;
}

std::string join_names(const std::vector<std::string>& names, std::string_view prefix = "") {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + std::string(prefix) + n;
  return out;
}

// ---- ImplicitColumns -------------------------------------------------------

std::optional<RepairOutput> fix_implicit_columns(const RepairInput& in) {
  const AnnotatedStatement* s = finding_statement(in);
  if (!s || s->kind != StatementKind::Insert || !s->target_table ||
      s->has_clause(ClauseRole::ColumnList))
    return std::nullopt;
  const TableSchema* t = in.ctx.table(*s->target_table);
  if (!t || t->columns.empty()) return std::nullopt;
  auto tuples = value_tuples(*s);
  if (tuples.empty()) return std::nullopt;
  for (const auto& tup : tuples)
    if (tup.size() != t->columns.size()) return std::nullopt;
  auto kw = values_keyword(*s);
  if (!kw) return std::nullopt;
  std::vector<std::string> names;
  for (const auto& c : t->columns) names.push_back(c.name);
  RepairOutput out;
  out.transformations.push_back(
      rewritten(*s, {{Span{*kw, *kw + 1}, "(" + join_names(names) + ") " + s->tokens[*kw].text}},
                "insert column-list (" + join_names(names) + ")"));
  return out;
}

// ---- ColumnWildcardUsage ---------------------------------------------------

std::optional<RepairOutput> fix_wildcard(const RepairInput& in) {
  const AnnotatedStatement* s = finding_statement(in);
  if (!s || s->kind != StatementKind::Select || s->table_refs.empty()) return std::nullopt;
  for (const auto& sp : s->spans(ClauseRole::From))
    for (std::size_t i : significant(*s, sp))
      if (s->tokens[i].is_word("SELECT")) return std::nullopt;  // derived table
  if (!s->tokens.empty() && significant(*s, Span{0, s->tokens.size()}).size() > 0 &&
      s->tokens[significant(*s, Span{0, s->tokens.size()}).front()].is_word("WITH"))
    return std::nullopt;

  std::vector<std::pair<std::string, const TableSchema*>> sources;
  for (const auto& r : s->table_refs) {
    const TableSchema* t = in.ctx.table(r.name);
    if (!t || t->columns.empty()) return std::nullopt;
    sources.emplace_back(r.alias.empty() ? r.name : r.alias, t);
  }
  auto columns_of = [](const TableSchema* t, const std::string& qualifier) {
    std::vector<std::string> out;
    for (const auto& c : t->columns) out.push_back(qualifier.empty() ? c.name : qualifier + "." + c.name);
    return out;
  };

  std::vector<TokenEdit> edits;
  const auto& proj = s->spans(ClauseRole::Projection);
  if (proj.empty()) return std::nullopt;
  auto sig = significant(*s, proj.front());
  int depth = 0;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    const Token& t = s->tokens[sig[k]];
    if (t.is_punct('(')) ++depth;
    if (t.is_punct(')')) --depth;
    if (depth != 0 || !(t.is_op("*") || t.is_punct('*') || t.text == "*")) continue;
    if (k >= 2 && s->tokens[sig[k - 1]].is_punct('.')) {
      std::string q = unquote(s->tokens[sig[k - 2]].text);
      const TableSchema* t2 = nullptr;
      for (const auto& [name, schema] : sources)
        if (iequals(name, q) || iequals(schema->name, q)) t2 = schema;
      if (!t2) return std::nullopt;
      edits.push_back({Span{sig[k - 2], sig[k] + 1}, join_names(columns_of(t2, q))});
    } else {
      std::vector<std::string> all;
      for (const auto& [name, schema] : sources) {
        auto cols = columns_of(schema, sources.size() == 1 ? "" : name);
        all.insert(all.end(), cols.begin(), cols.end());
      }
      edits.push_back({Span{sig[k], sig[k] + 1}, join_names(all)});
    }
  }
  if (edits.empty()) return std::nullopt;
  RepairOutput out;
  out.transformations.push_back(rewritten(*s, edits, "expand * from the schema"));
  return out;
}

// ---- ConcatenateNulls ------------------------------------------------------

std::optional<RepairOutput> fix_concat_nulls(const RepairInput& in) {
  const AnnotatedStatement* s = finding_statement(in);
  if (!s) return std::nullopt;
  auto sig = significant(*s, Span{0, s->tokens.size()});
  auto tk = [&](std::size_t k) -> const Token& { return s->tokens[sig[k]]; };
  auto ident = [&](std::size_t k) { return k < sig.size() && tk(k).kind == TokenKind::Identifier; };
  std::set<std::pair<std::size_t, std::size_t>> operands;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (!tk(k).is_op("||")) continue;
    if (k >= 1 && ident(k - 1)) {
      std::size_t first = k - 1;
      while (first >= 2 && tk(first - 1).is_punct('.') && ident(first - 2)) first -= 2;
      operands.emplace(first, k - 1);
    }
    if (ident(k + 1)) {
      std::size_t last = k + 1;
      while (last + 2 < sig.size() && tk(last + 1).is_punct('.') && ident(last + 2)) last += 2;
      bool call = last + 1 < sig.size() && tk(last + 1).is_punct('(');
      if (!call) operands.emplace(k + 1, last);
    }
  }
  if (operands.empty()) return std::nullopt;
  std::vector<TokenEdit> edits;
  for (auto [first, last] : operands) {
    Span sp{sig[first], sig[last] + 1};
    edits.push_back({sp, "COALESCE(" + s->text_of(sp) + ", '')"});
  }
  RepairOutput out;
  out.transformations.push_back(rewritten(*s, edits, "wrap || operands in COALESCE(x, '')"));
  return out;
}

// ---- IndexUnderuse ---------------------------------------------------------

std::optional<RepairOutput> fix_index_underuse(const RepairInput& in) {
  const Finding& f = in.finding;
  if (f.location.table.empty() || f.location.column.empty()) return std::nullopt;
  std::string table = table_name(in.ctx, f.location.table);
  std::string column = column_name(in.ctx, f.location.table, f.location.column);
  std::string name = "idx_" + lower(table) + "_" + lower(column);
  if (const TableSchema* t = in.ctx.table(table))
    for (const auto& i : t->indexes)
      if (iequals(i.name, name)) name += "_2";
  RepairOutput out;
  out.transformations.push_back(create(f, 1, "new index " + name,
                                       "CREATE INDEX " + name + " ON " + table + " (" + column +
                                           ")"));
  return out;
}

// ---- NoPrimaryKey ----------------------------------------------------------

bool id_like(std::string_view column, std::string_view table) {
  std::string c = lower(std::string(column));
  std::string t = lower(std::string(table));
  if (c == "id" || c == t + "_id" || c == t + "id") return true;
  if (!t.empty() && t.back() == 's' && c == t.substr(0, t.size() - 1) + "_id") return true;
  return c.size() > 2 && (c.ends_with("_id") || c.ends_with("id")) &&
         !c.ends_with("_ids") && !c.ends_with("ids");
}

std::optional<RepairOutput> fix_no_primary_key(const RepairInput& in) {
  const Finding& f = in.finding;
  const TableSchema* t = in.ctx.table(f.location.table);
  if (!t || t->has_primary_key()) return std::nullopt;
  RepairOutput out;
  std::optional<std::string> key;
  // Declared NOT NULL + UNIQUE is a candidate key already.
  for (const auto& c : t->columns) {
    bool unique = std::any_of(t->constraints.begin(), t->constraints.end(), [&](const auto& k) {
      return k.kind == ConstraintKind::Unique && k.columns.size() == 1 && iequals(k.columns[0], c.name);
    });
    if (unique && t->not_null(c.name)) {
      key = c.name;
      break;
    }
  }
  if (!key) {
    const SampledTable* sample = in.ctx.sample(t->name);
    for (const auto& c : t->columns) {
      const ColumnProfile* p = in.ctx.profile(t->name, c.name);
      if (!p || p->row_count_sampled == 0 || p->null_fraction > 0 ||
          p->distinct_count != p->row_count_sampled || !id_like(c.name, t->name))
        continue;
      key = c.name;
      if (sample && sample->total_rows > sample->rows.size())
        out.notes.push_back("uniqueness of " + c.name + " was checked on a sample of " +
                            std::to_string(sample->rows.size()) + " of " +
                            std::to_string(sample->total_rows) + " rows");
      break;
    }
  }
  if (!key) return std::nullopt;
  out.transformations.push_back(create(f, 1, "add primary key (" + *key + ")",
                                       "ALTER TABLE " + t->name + " ADD PRIMARY KEY (" + *key +
                                           ")"));
  return out;
}

// ---- EnumeratedTypes -------------------------------------------------------

// Literal members of `col IN (...)`.
std::vector<std::string> in_list_values(std::string_view expression) {
  auto lexed = tokenize(expression);
  std::vector<std::string> out;
  bool in_list = false;
  for (std::size_t i = 0; i < lexed.tokens.size(); ++i) {
    const Token& t = lexed.tokens[i];
    if (t.trivia()) continue;
    if (t.is_word("IN")) {
      in_list = true;
      continue;
    }
    if (!in_list) continue;
    if (t.is_punct(')')) break;
    if (t.kind == TokenKind::Literal)
      out.push_back(t.is_string_literal() ? string_literal_value(t.text) : t.text);
  }
  return out;
}

const ConstraintDecl* enum_check(const AnnotatedStatement& s, const Finding& f) {
  for (const auto& c : s.constraints) {
    if (c.kind != ConstraintKind::Check || !c.expression_text) continue;
    if (!f.location.object.empty() && !(c.name && iequals(*c.name, f.location.object))) continue;
    bool on_col = std::any_of(c.columns.begin(), c.columns.end(),
                              [&](const auto& x) { return iequals(x, f.location.column); });
    auto lexed = tokenize(*c.expression_text);
    for (const auto& t : lexed.tokens)
      if (t.kind == TokenKind::Identifier && iequals(unquote(t.text), f.location.column)) on_col = true;
    if (on_col) return &c;
  }
  return nullptr;
}

std::optional<RepairOutput> fix_enumerated_types(const RepairInput& in) {
  const Finding& f = in.finding;
  const auto& ctx = in.ctx;
  if (f.location.table.empty() || f.location.column.empty()) return std::nullopt;
  const TableSchema* t = ctx.table(f.location.table);
  std::string table = table_name(ctx, f.location.table);
  std::string column = column_name(ctx, f.location.table, f.location.column);
  const ColumnDecl* decl = t ? t->column(column) : nullptr;
  if (decl && lower(decl->declared_type).starts_with("enum")) return std::nullopt;

  RepairOutput out;
  std::vector<std::string> values;
  const AnnotatedStatement* defining = nullptr;
  const ConstraintDecl* check = nullptr;
  if (const AnnotatedStatement* s = finding_statement(in)) {
    if ((check = enum_check(*s, f))) {
      defining = s;
      values = in_list_values(*check->expression_text);
    }
  }
  if (!check && t) {
    for (const auto& c : t->constraints)
      if (c.kind == ConstraintKind::Check && c.expression_text && t->has_check_on(column)) {
        auto v = in_list_values(*c.expression_text);
        if (!v.empty()) {
          values = v;
          check = &c;
          break;
        }
      }
  }
  if (values.empty()) {
    const ColumnProfile* p = ctx.profile(f.location.table, f.location.column);
    if (!p) return std::nullopt;
    std::set<std::string> distinct;
    for (const auto& cell : p->sample)
      if (cell) distinct.insert(*cell);
    values.assign(distinct.begin(), distinct.end());
    if (const SampledTable* st = ctx.sample(f.location.table);
        st && st->total_rows > st->rows.size())
      out.notes.push_back("lookup values come from a sample of " +
                          std::to_string(st->rows.size()) + " rows; add any missing ones");
  }
  if (values.size() < 2) return std::nullopt;

  std::string lookup = fresh_table(ctx, column + "_lookup");
  std::string id_col = column + "_ID";
  std::string name_col = column + "_Name";
  std::string name_type = decl && textual_type(decl->declared_type) ? decl->declared_type
                                                                     : "VARCHAR(64)";
  std::size_t n = 0;
  out.transformations.push_back(create(f, ++n, "new lookup table " + lookup,
                                       "CREATE TABLE " + lookup + " (" + id_col +
                                           " INTEGER PRIMARY KEY, " + name_col + " " + name_type +
                                           " NOT NULL UNIQUE)"));
  std::string rows;
  for (std::size_t i = 0; i < values.size(); ++i)
    rows += (i ? ", (" : "(") + std::to_string(i + 1) + ", " + sql_string(values[i]) + ")";
  out.transformations.push_back(create(f, ++n, "populate " + lookup,
                                       "INSERT INTO " + lookup + " (" + id_col + ", " + name_col +
                                           ") VALUES " + rows));

  std::string fk_name = table + "_" + column + "_fk";
  std::string reference = "REFERENCES " + lookup + " (" + name_col + ")";
  std::string table_fk = "CONSTRAINT " + fk_name + " FOREIGN KEY (" + column + ") " + reference;
  if (check && check->name)
    out.transformations.push_back(create(f, ++n, "drop constraint " + *check->name,
                                         "ALTER TABLE " + table + " DROP CONSTRAINT IF EXISTS " +
                                             *check->name));
  if (decl && !decl->declared_type.empty() && !iequals(decl->declared_type, name_type))
    out.notes.push_back("retype " + table + "." + column + " to " + name_type +
                        " to match " + lookup + "." + name_col);
  if (defining && check) {
    std::string replacement = check->inline_decl ? reference : table_fk;
    out.transformations.push_back(rewritten(*defining, {{check->span, replacement}},
                                            "replace CHECK with a foreign key to " + lookup));
  } else {
    out.transformations.push_back(create(f, ++n, "foreign key to " + lookup,
                                         "ALTER TABLE " + table + " ADD " + table_fk));
  }
  return out;
}

// ---- MultiValuedAttribute --------------------------------------------------

struct Chain {
  std::size_t first;  // token indexes
  std::size_t last;
  std::string qualifier;
  std::string column;
};

// Column chains (a.b, a.b.c) inside a span, excluding function names.
std::vector<Chain> chains(const AnnotatedStatement& s, Span span) {
  auto sig = significant(s, span);
  auto tk = [&](std::size_t k) -> const Token& { return s.tokens[sig[k]]; };
  auto ident = [&](std::size_t k) { return k < sig.size() && tk(k).kind == TokenKind::Identifier; };
  std::vector<Chain> out;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (!ident(k)) continue;
    std::size_t last = k;
    while (last + 2 < sig.size() && tk(last + 1).is_punct('.') && ident(last + 2)) last += 2;
    if (last + 1 < sig.size() && tk(last + 1).is_punct('(')) {
      k = last;
      continue;
    }
    Chain c{sig[k], sig[last], last >= k + 2 ? unquote(tk(last - 2).text) : "",
            unquote(tk(last).text)};
    out.push_back(c);
    k = last;
  }
  return out;
}

std::string singular(std::string name) {
  if (name.size() > 1 && (name.back() == 's' || name.back() == 'S')) name.pop_back();
  return name;
}

std::vector<std::string> split_list(std::string_view value) {
  char delim = 0;
  for (char d : {',', ';', '|'})
    if (value.find(d) != std::string_view::npos) {
      delim = d;
      break;
    }
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t end = delim ? value.find(delim, start) : std::string_view::npos;
    if (end == std::string_view::npos) end = value.size();
    std::string item(value.substr(start, end - start));
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    start = end + 1;
  }
  return out;
}

// The single list element a word-boundary pattern searches for.
std::optional<std::string> pattern_element(const std::string& pattern) {
  std::string v = pattern;
  for (const char* marker : {"[[:<:]]", "[[:>:]]", "\\b", "\\y", "\\m", "\\M"}) {
    for (auto pos = v.find(marker); pos != std::string::npos; pos = v.find(marker))
      v.erase(pos, std::string_view(marker).size());
  }
  while (!v.empty() && (v.front() == '%' || v.front() == ',' || v.front() == ' ')) v.erase(0, 1);
  while (!v.empty() && (v.back() == '%' || v.back() == ',' || v.back() == ' ')) v.pop_back();
  if (v.empty() || v.find_first_of("%_[]().*+?|^$\\,") != std::string::npos) return std::nullopt;
  return v;
}

struct MvaPlan {
  const TableSchema* a = nullptr;
  std::string column;  // as written
  std::string a_key;
  std::string b_table;
  std::string b_key;
  std::string xref;
  std::string x_a;  // xref column referencing a
  std::string x_b;
};

bool refers_to(const AnnotatedStatement& s, const ColumnRef& ref, const MvaPlan& p) {
  if (!iequals(ref.column, p.column)) return false;
  return ref.table.empty() || iequals(ref.table, p.a->name) ||
         iequals(s.resolve_qualifier(ref.table), p.a->name);
}

// Mentions of the column by name, as token indexes.
std::vector<std::size_t> mentions(const AnnotatedStatement& s, const std::string& column) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    if (s.tokens[i].kind == TokenKind::Identifier && iequals(unquote(s.tokens[i].text), column))
      out.push_back(i);
  return out;
}

std::optional<StatementTransformation> mva_select(const AnnotatedStatement& s, const MvaPlan& p,
                                                  const ApplicationContext& ctx) {
  const Predicate* pred = nullptr;
  for (const auto& q : s.predicates) {
    if (!refers_to(s, q.column, p)) continue;
    if (pred || (q.op != "LIKE" && q.op != "ILIKE" && q.op != "REGEXP" && q.op != "RLIKE" &&
                 q.op != "~" && q.op != "~*"))
      return std::nullopt;
    pred = &q;
  }
  if (!pred) return std::nullopt;
  for (std::size_t i : mentions(s, p.column))
    if (i < pred->span.begin || i >= pred->span.end) return std::nullopt;

  const auto& from = s.spans(ClauseRole::From);
  if (from.size() != 1) return std::nullopt;
  auto fsig = significant(s, from.front());
  if (fsig.empty() || !iequals(unquote(s.tokens[fsig.front()].text), p.a->name)) return std::nullopt;
  for (std::size_t i : fsig)
    if (s.tokens[i].is_punct(',') || s.tokens[i].is_punct('(')) return std::nullopt;
  std::string a_ref = p.a->name;
  for (const auto& r : s.table_refs)
    if (iequals(r.name, p.a->name) && !r.alias.empty()) a_ref = r.alias;

  std::string replacement;
  for (const auto& c : chains(s, pred->rhs)) {
    std::string table = c.qualifier.empty() ? "" : s.resolve_qualifier(c.qualifier);
    if (iequals(table, p.b_table) && iequals(c.column, p.b_key)) {
      replacement = c.qualifier + "." + c.column + " = " + p.xref + "." + p.x_b;
      break;
    }
    if (c.qualifier.empty() && s.tables_referenced.size() >= 2) {
      // unqualified column in a join; only safe if B alone has it
      const TableSchema* bt = ctx.table(p.b_table);
      if (bt && bt->has_column(c.column) && iequals(c.column, p.b_key) && !p.a->has_column(c.column)) {
        replacement = p.b_table + "." + c.column + " = " + p.xref + "." + p.x_b;
        break;
      }
    }
  }
  if (replacement.empty()) {
    auto rsig = significant(s, pred->rhs);
    if (rsig.size() != 1 || !s.tokens[rsig[0]].is_string_literal()) return std::nullopt;
    auto element = pattern_element(string_literal_value(s.tokens[rsig[0]].text));
    if (!element) return std::nullopt;
    replacement = p.xref + "." + p.x_b + " = " + sql_string(*element);
  }

  std::vector<TokenEdit> edits;
  edits.push_back({from.front(), s.text_of(from.front()) + " JOIN " + p.xref + " ON " + p.xref +
                                     "." + p.x_a + " = " + a_ref + "." + p.a_key});
  edits.push_back({pred->span, replacement});
  // Keep SELECT * from picking up the intersection table's columns.
  if (s.has_wildcard_projection) {
    const auto& proj = s.spans(ClauseRole::Projection);
    if (!proj.empty()) {
      auto psig = significant(s, proj.front());
      std::vector<std::string> refs;
      for (const auto& r : s.table_refs) refs.push_back((r.alias.empty() ? r.name : r.alias) + ".*");
      for (std::size_t k = 0; k < psig.size(); ++k)
        if (s.tokens[psig[k]].text == "*" && (k == 0 || !s.tokens[psig[k - 1]].is_punct('.')) &&
            (k == 0 || !s.tokens[psig[k - 1]].is_punct('(')))
          edits.push_back({Span{psig[k], psig[k] + 1}, join_names(refs)});
    }
  }
  return rewritten(s, edits, "join " + p.xref + " instead of pattern-matching " + p.column);
}

// INSERT INTO A ... with a list value: drop the value, insert xref rows.
std::optional<std::vector<StatementTransformation>> mva_insert(const AnnotatedStatement& s,
                                                               const MvaPlan& p, const Finding& f,
                                                               std::size_t& n) {
  std::vector<std::string> cols = insert_columns(s);
  if (cols.empty())
    for (const auto& c : p.a->columns) cols.push_back(c.name);
  auto index_of = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (iequals(cols[i], name)) return i;
    return std::nullopt;
  };
  auto ci = index_of(p.column);
  auto ki = index_of(p.a_key);
  if (!ci || !ki) return std::nullopt;
  auto tuples = value_tuples(s);
  if (tuples.empty()) return std::nullopt;

  std::vector<std::string> kept_cols;
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (i != *ci) kept_cols.push_back(cols[i]);
  std::string rows, xrows;
  for (const auto& tup : tuples) {
    if (tup.size() != cols.size()) return std::nullopt;
    std::vector<std::string> vals;
    for (std::size_t i = 0; i < tup.size(); ++i)
      if (i != *ci) vals.push_back(s.text_of(tup[i]));
    rows += (rows.empty() ? "(" : ", (") + join_names(vals) + ")";
    auto vsig = significant(s, tup[*ci]);
    if (vsig.size() != 1) return std::nullopt;
    const Token& v = s.tokens[vsig[0]];
    if (v.is_word("NULL")) continue;
    if (!v.is_string_literal()) return std::nullopt;
    for (const auto& e : split_list(string_literal_value(v.text)))
      xrows += (xrows.empty() ? "(" : ", (") + sql_string(e) + ", " + s.text_of(tup[*ki]) + ")";
  }
  std::vector<StatementTransformation> out;
  out.push_back({TransformOp::RewriteExisting, s.source_id,
                 "drop the " + p.column + " value; explicit column-list",
                 render(parse("INSERT INTO " + p.a->name + " (" + join_names(kept_cols) +
                              ") VALUES " + rows))});
  if (!xrows.empty())
    out.push_back(create(f, ++n, "move list elements into " + p.xref,
                         "INSERT INTO " + p.xref + " (" + p.x_b + ", " + p.x_a + ") VALUES " +
                             xrows));
  return out;
}

std::optional<RepairOutput> fix_mva(const RepairInput& in) {
  const Finding& f = in.finding;
  const auto& ctx = in.ctx;
  MvaPlan p;
  p.a = ctx.table(f.location.table);
  if (!p.a || f.location.column.empty()) return std::nullopt;
  const ColumnDecl* col = p.a->column(f.location.column);
  if (!col) return std::nullopt;
  p.column = col->name;
  auto pk = p.a->primary_key();
  if (pk.size() != 1) return std::nullopt;
  const ColumnDecl* a_key = p.a->column(pk[0]);
  if (!a_key) return std::nullopt;
  p.a_key = a_key->name;

  // Referenced entity: a column compared against the list in a query, else a
  // table keyed by the singular of the column name.
  for (const auto* s : in.to_transform) {
    for (const auto& q : s->predicates) {
      if (!refers_to(*s, q.column, p) || !is_pattern_op(q.op)) continue;
      for (const auto& c : chains(*s, q.rhs)) {
        std::string table = c.qualifier.empty() ? "" : s->resolve_qualifier(c.qualifier);
        const TableSchema* t = ctx.table(table);
        if (t && !iequals(t->name, p.a->name) && t->has_column(c.column)) {
          p.b_table = t->name;
          p.b_key = t->column(c.column)->name;
        }
      }
      if (!p.b_table.empty()) break;
    }
    if (!p.b_table.empty()) break;
  }
  if (p.b_table.empty()) {
    std::string element = singular(p.column);
    for (const auto& [key, t] : ctx.schemas) {
      if (iequals(t.name, p.a->name)) continue;
      auto tpk = t.primary_key();
      if (tpk.size() == 1 && iequals(tpk[0], element)) {
        p.b_table = t.name;
        p.b_key = t.column(element) ? t.column(element)->name : element;
        break;
      }
    }
  }
  if (p.b_table.empty()) return std::nullopt;
  const TableSchema* b = ctx.table(p.b_table);
  const ColumnDecl* b_key = b ? b->column(p.b_key) : nullptr;

  p.xref = !in.options.intersection_table.empty() ? in.options.intersection_table
                                                  : fresh_table(ctx, p.a->name + "_" + p.b_table + "_xref");
  p.x_a = p.a_key;
  p.x_b = p.b_key;
  if (iequals(p.x_a, p.x_b)) {
    p.x_a = p.a->name + "_" + p.a_key;
    p.x_b = p.b_table + "_" + p.b_key;
  }
  std::string a_type = type_or(a_key->declared_type, "VARCHAR(64)");
  std::string b_type = type_or(b_key ? b_key->declared_type : "", a_type);

  RepairOutput out;
  std::size_t n = 0;
  out.transformations.push_back(
      create(f, ++n, "new intersection table " + p.xref,
             "CREATE TABLE " + p.xref + " (" + p.x_b + " " + b_type + " REFERENCES " + p.b_table +
                 "(" + p.b_key + "), " + p.x_a + " " + a_type + " REFERENCES " + p.a->name + "(" +
                 p.a_key + "), PRIMARY KEY (" + p.x_b + ", " + p.x_a + "))"));

  std::vector<StatementTransformation> later;
  for (const auto* s : in.to_transform) {
    bool mentioned = !mentions(*s, p.column).empty();
    bool implicit_insert = s->kind == StatementKind::Insert && s->target_table &&
                           iequals(*s->target_table, p.a->name) &&
                           !s->has_clause(ClauseRole::ColumnList);
    if (!mentioned && !implicit_insert) continue;
    std::optional<std::vector<StatementTransformation>> done;
    if (s->kind == StatementKind::CreateTable && s->target_table &&
        iequals(*s->target_table, p.a->name)) {
      for (const auto& c : s->column_defs) {
        if (!iequals(c.name, p.column)) continue;
        // Remove the definition together with one neighbouring comma.
        Span range = c.span;
        auto before = significant(*s, Span{0, c.span.begin});
        auto after = significant(*s, Span{c.span.end, s->tokens.size()});
        if (!before.empty() && s->tokens[before.back()].is_punct(','))
          range.begin = before.back();
        else if (!after.empty() && s->tokens[after.front()].is_punct(','))
          range.end = after.front() + 1;
        bool referenced_elsewhere = false;
        for (std::size_t i : mentions(*s, p.column))
          if (i < range.begin || i >= range.end) referenced_elsewhere = true;
        if (!referenced_elsewhere)
          done = std::vector{rewritten(*s, {{range, ""}}, "drop column definition " + p.column)};
      }
    } else if (s->kind == StatementKind::Select) {
      if (auto t = mva_select(*s, p, ctx)) done = std::vector{*t};
    } else if (s->kind == StatementKind::Insert && s->target_table &&
               iequals(*s->target_table, p.a->name)) {
      done = mva_insert(*s, p, f, n);
    }
    if (done)
      later.insert(later.end(), done->begin(), done->end());
    else if (mentioned)
      out.notes.push_back("statement " + s->source_id + " uses " + p.a->name + "." + p.column +
                          " and needs a manual rewrite against " + p.xref);
  }
  out.transformations.push_back(create(f, ++n, "drop column " + p.column,
                                       "ALTER TABLE " + p.a->name + " DROP COLUMN " + p.column));
  out.transformations.insert(out.transformations.end(), later.begin(), later.end());
  out.notes.push_back("migrate existing " + p.a->name + "." + p.column + " values into " +
                      p.xref + " before dropping the column");
  return out;
}

// ---- Textual fixes ---------------------------------------------------------

std::string where(const Finding& f) {
  if (!f.location.statement_id.empty()) return "statement " + f.location.statement_id;
  if (!f.location.table.empty()) return "table " + f.location.table;
  return "the query";
}

std::string textual(const Finding& f, const ApplicationContext& ctx) {
  const auto& loc = f.location;
  std::string t = loc.table.empty() ? std::string("<table>") : table_name(ctx, loc.table);
  std::string c = loc.column.empty() ? std::string("<column>") : column_name(ctx, loc.table, loc.column);
  std::string at = where(f);
  switch (f.kind) {
    case ApKind::MultiValuedAttribute:
      return "Store the elements of " + t + "." + c + " one per row: create an intersection "
             "table referencing " + t + " and the entity the list elements identify, copy the "
             "list elements into it, drop " + t + "." + c + " and rewrite the queries that "
             "pattern-match on it as joins.";
    case ApKind::NoPrimaryKey:
      return "Declare a primary key on " + t + ": ALTER TABLE " + t + " ADD PRIMARY KEY (<key "
             "column>), choosing a NOT NULL column that is unique per row (or add a surrogate "
             "key column).";
    case ApKind::NoForeignKey: {
      std::string parent = "<parent>(<key>)";
      if (loc.related)
        parent = table_name(ctx, loc.related->table) + "(" +
                 column_name(ctx, loc.related->table, loc.related->column) + ")";
      return "Declare the relationship that queries join on: ALTER TABLE " + t +
             " ADD FOREIGN KEY (" + c + ") REFERENCES " + parent + ";";
    }
    case ApKind::GenericPrimaryKey:
      return "Rename the primary key of " + t + " from '" + c + "' to a descriptive name such as " +
             t + "_ID so joins read unambiguously.";
    case ApKind::DataInMetadata:
      return "Columns of " + t + " encode data in their names (" + c + ", ...). Move the "
             "varying part into a row value: one child table with a (key, discriminator, value) "
             "layout instead of numbered columns.";
    case ApKind::AdjacencyList:
      return "The self-reference " + t + "." + c + " makes hierarchy queries recursive. Consider "
             "a closure table (ancestor, descendant, depth) or a path enumeration column.";
    case ApKind::GodTable:
      return "Split " + t + " into tables that each describe one entity; move groups of "
             "columns that are read together into 1:1 or 1:n child tables keyed by " + t +
             "'s primary key.";
    case ApKind::RoundingErrors:
      return "Use an exact type for " + t + "." + c + ": ALTER TABLE " + t + " ALTER COLUMN " + c +
             " TYPE NUMERIC(p, s) with a scale matching the values stored.";
    case ApKind::EnumeratedTypes:
      return "Replace the value list on " + t + "." + c + " with a lookup table: CREATE TABLE " + c +
             "_lookup (" + c + "_ID INTEGER PRIMARY KEY, " + c + "_Name VARCHAR(64) NOT NULL "
             "UNIQUE), insert the allowed values, reference it with a foreign key from " + t +
             "." + c + (loc.object.empty() ? std::string(".")
                                          : " and ALTER TABLE " + t +
                                                " DROP CONSTRAINT IF EXISTS " + loc.object + ".");
    case ApKind::ExternalDataStorage:
      return t + "." + c + " appears to store a file path. Keep the content in the database "
             "(BLOB/BYTEA) or make sure backups, permissions and deletes cover the external "
             "files.";
    case ApKind::IndexOveruse:
      return "Index " + (loc.object.empty() ? std::string("<index>") : loc.object) + " on " + t +
             " is never the best index for any workload query; drop it (DROP INDEX " +
             (loc.object.empty() ? std::string("<index>") : loc.object) +
             ") to save write and storage cost.";
    case ApKind::IndexUnderuse:
      return "Queries filter " + t + " by " + c + " without a supporting index: CREATE INDEX idx_" +
             lower(t) + "_" + lower(c) + " ON " + t + " (" + c + ").";
    case ApKind::CloneTable:
      return "Tables named like " + t + " are clones split by a suffix. Merge them into one "
             "table with a column holding the suffix value.";
    case ApKind::ColumnWildcardUsage:
      return "List the needed columns instead of * in " + at +
             "; the result then survives schema changes and transfers less data.";
    case ApKind::ConcatenateNulls:
      return "Wrap nullable operands of || in COALESCE(x, '') in " + at +
             ", or declare the columns NOT NULL.";
    case ApKind::OrderingByRand:
      return "ORDER BY RAND() sorts the whole table (" + at + "). Pick a random offset instead: "
             "count the rows, choose k at random in the application, then SELECT ... LIMIT 1 "
             "OFFSET k.";
    case ApKind::PatternMatching:
      return "Pattern matching in " + at + " cannot use an ordinary index. Use a full-text "
             "index, or store the searched elements in their own column or table.";
    case ApKind::ImplicitColumns:
      return "List the target columns explicitly in " + at +
             ": INSERT INTO " + t + " (col1, col2, ...) VALUES (...).";
    case ApKind::DistinctAndJoin:
      return "DISTINCT over a join in " + at + " removes duplicates the join created. Use EXISTS "
             "or a semi-join so duplicates are never produced.";
    case ApKind::TooManyJoins:
      return "Reduce the joins in " + at + ": split the query, or materialize a frequently "
             "joined combination.";
    case ApKind::MissingTimezone:
      return "Store " + t + "." + c + " with a time zone: ALTER TABLE " + t + " ALTER COLUMN " + c +
             " TYPE TIMESTAMP WITH TIME ZONE (or store UTC and document it).";
    case ApKind::IncorrectDataType:
      return "Values of " + t + "." + c + " are numeric but stored as text. Change the column to "
             "a numeric type so comparisons and sorting are correct.";
    case ApKind::DenormalizedTable: {
      std::string other = loc.related ? loc.related->column : std::string("<column>");
      return t + "." + c + " and " + t + "." + other + " determine each other. Move the pair "
             "into its own table keyed by " + c + " and keep only " + c + " in " + t + ".";
    }
    case ApKind::InformationDuplication: {
      std::string from = loc.related ? loc.related->column : std::string("<column>");
      return t + "." + c + " can be derived from " + t + "." + from + ". Drop it and compute it "
             "in queries or a view so the two cannot drift apart.";
    }
    case ApKind::RedundantColumn:
      return t + "." + c + " holds no information (all NULL or one constant value). Drop it: "
             "ALTER TABLE " + t + " DROP COLUMN " + c + ".";
    case ApKind::NoDomainConstraint:
      return "Add the value range of " + t + "." + c + " as a constraint: ALTER TABLE " + t +
             " ADD CHECK (" + c + " BETWEEN <min> AND <max>).";
  }
  return "Review " + at + ".";
}

}  // namespace

std::vector<RepairRule> builtin_repair_rules() {
  std::vector<RepairRule> out;
  for (const auto& ki : all_kinds()) {
    ApKind kind = ki.kind;
    RepairRule r{kind, {}, textual};
    switch (kind) {
      case ApKind::MultiValuedAttribute: r.transform = fix_mva; break;
      case ApKind::ImplicitColumns: r.transform = fix_implicit_columns; break;
      case ApKind::ColumnWildcardUsage: r.transform = fix_wildcard; break;
      case ApKind::EnumeratedTypes: r.transform = fix_enumerated_types; break;
      case ApKind::ConcatenateNulls: r.transform = fix_concat_nulls; break;
      case ApKind::IndexUnderuse: r.transform = fix_index_underuse; break;
      case ApKind::NoPrimaryKey: r.transform = fix_no_primary_key; break;
      default: break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sqlsmell::detail
