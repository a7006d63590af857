#include "sqlsmell/context.hpp"

#include "sqlsmell/profiler.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace sqlsmell {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::IntraQuery: return "intra-query";
    case Phase::InterQuery: return "inter-query";
    case Phase::Data: return "data";
  }
  return "?";
}

std::string_view to_string(Confidence confidence) {
  switch (confidence) {
    case Confidence::Low: return "low";
    case Confidence::Medium: return "medium";
    case Confidence::High: return "high";
  }
  return "?";
}

std::string Location::display() const {
  std::string out;
  if (!table.empty()) out = column.empty() ? table : table + "." + column;
  if (!object.empty()) out += (out.empty() ? "" : " ") + ("[" + object + "]");
  if (!statement_id.empty()) out += (out.empty() ? "" : " @ ") + statement_id;
  return out;
}

std::string_view to_string(ValueClass value_class) {
  switch (value_class) {
    case ValueClass::Integer: return "Integer";
    case ValueClass::Decimal: return "Decimal";
    case ValueClass::Text: return "Text";
    case ValueClass::DateTime: return "DateTime";
    case ValueClass::Boolean: return "Boolean";
    case ValueClass::Mixed: return "Mixed";
  }
  return "Mixed";
}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ::toupper);
  return out;
}

bool contains_any(const std::string& hay, std::initializer_list<const char*> needles) {
  return std::any_of(needles.begin(), needles.end(),
                     [&](const char* n) { return hay.find(n) != std::string::npos; });
}

}  // namespace

bool textual_type(std::string_view declared_type) {
  std::string t = upper(declared_type);
  return contains_any(t, {"CHAR", "TEXT", "CLOB", "STRING", "NAME"});
}

bool numeric_type(std::string_view declared_type) {
  std::string t = upper(declared_type);
  if (textual_type(t)) return false;
  return contains_any(t, {"INT", "DEC", "NUM", "REAL", "FLOAT", "DOUBLE", "MONEY", "SERIAL"});
}

const ColumnDecl* TableSchema::column(std::string_view name) const {
  for (const auto& c : columns)
    if (iequals(unquote(c.name), unquote(name))) return &c;
  return nullptr;
}

bool TableSchema::has_primary_key() const {
  return std::any_of(constraints.begin(), constraints.end(),
                     [](const ConstraintDecl& c) { return c.kind == ConstraintKind::PrimaryKey; });
}

std::vector<std::string> TableSchema::primary_key() const {
  for (const auto& c : constraints)
    if (c.kind == ConstraintKind::PrimaryKey) return c.columns;
  return {};
}

bool TableSchema::has_check_on(std::string_view col) const {
  std::string needle = canonical(col);
  for (const auto& c : constraints) {
    if (c.kind != ConstraintKind::Check) continue;
    if (std::any_of(c.columns.begin(), c.columns.end(),
                    [&](const std::string& x) { return canonical(x) == needle; }))
      return true;
    // Table-level CHECK: look for the column name as a word in the expression.
    auto lexed = tokenize(c.expression_text.value_or(""));
    for (const auto& t : lexed.tokens)
      if (t.kind == TokenKind::Identifier && canonical(t.text) == needle) return true;
  }
  return false;
}

bool TableSchema::not_null(std::string_view col) const {
  const ColumnDecl* c = column(col);
  if (c && !c->nullable) return true;
  for (const auto& pk : primary_key())
    if (iequals(pk, col)) return true;
  return false;
}

const ConstraintDecl* TableSchema::foreign_key_on(std::string_view col) const {
  for (const auto& c : constraints)
    if (c.kind == ConstraintKind::ForeignKey)
      for (const auto& x : c.columns)
        if (iequals(x, col)) return &c;
  return nullptr;
}

const TableSchema* ApplicationContext::table(std::string_view name) const {
  auto it = schemas.find(canonical(name));
  return it == schemas.end() ? nullptr : &it->second;
}

const ColumnProfile* ApplicationContext::profile(std::string_view t, std::string_view c) const {
  auto it = profiles.find({canonical(t), canonical(c)});
  return it == profiles.end() ? nullptr : &it->second;
}

const SampledTable* ApplicationContext::sample(std::string_view t) const {
  auto it = samples.find(canonical(t));
  return it == samples.end() ? nullptr : &it->second;
}

bool ApplicationContext::joined(const ColumnRef& a, const ColumnRef& b) const {
  return std::any_of(join_graph.begin(), join_graph.end(), [&](const JoinEdge& e) {
    return (e.left.same_as(a) && e.right.same_as(b)) || (e.left.same_as(b) && e.right.same_as(a));
  });
}

namespace {

class Builder {
 public:
  explicit Builder(ApplicationContext& ctx) : ctx_(ctx) {}

  TableSchema& table(const std::string& name) {
    auto& t = ctx_.schemas[canonical(name)];
    if (t.name.empty()) t.name = unquote(name);
    return t;
  }

  void add_implicit_indexes(TableSchema& t, const ConstraintDecl& c, const std::string& source) {
    if (c.kind != ConstraintKind::PrimaryKey && c.kind != ConstraintKind::Unique) return;
    IndexDecl idx;
    idx.primary = c.kind == ConstraintKind::PrimaryKey;
    idx.name = c.name.value_or(t.name + (idx.primary ? "_pkey" : "_" + join(c.columns) + "_key"));
    idx.columns = c.columns;
    idx.source_id = source;
    idx.unique = true;
    idx.implicit = true;
    t.indexes.push_back(idx);
  }

  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : "_") + x;
    return out;
  }

  // `authoritative` is false for DDL that came from the dataset: it only
  // fills tables the workload did not declare.
  void apply_ddl(const AnnotatedStatement& s, bool authoritative) {
    if (s.kind == StatementKind::CreateTable && s.target_table) {
      TableSchema& t = table(*s.target_table);
      if (t.from_ddl) {
        t.source_ids.push_back(s.source_id);
        return;
      }
      if (!authoritative && t.from_data) return;
      t.from_ddl = true;
      t.source_ids.push_back(s.source_id);
      if (authoritative && !t.first_ordinal) t.first_ordinal = s.ordinal;
      for (const auto& c : s.column_defs)
        if (!t.has_column(c.name)) t.columns.push_back(c);
      for (const auto& c : s.constraints) {
        t.constraints.push_back(c);
        add_implicit_indexes(t, c, s.source_id);
      }
    } else if (s.kind == StatementKind::AlterTable && s.target_table) {
      TableSchema& t = table(*s.target_table);
      t.source_ids.push_back(s.source_id);
      if (authoritative && !t.first_ordinal) t.first_ordinal = s.ordinal;
      for (const auto& c : s.column_defs)
        if (!t.has_column(c.name)) t.columns.push_back(c);
      for (const auto& c : s.constraints) {
        ConstraintDecl copy = c;
        // ADD CONSTRAINT x CHECK (...) carries no column list; recover it
        // from the expression.
        if (copy.kind == ConstraintKind::Check && copy.columns.empty()) {
          auto lexed = tokenize(copy.expression_text.value_or(""));
          for (const auto& tok : lexed.tokens)
            if (tok.kind == TokenKind::Identifier) {
              copy.columns.push_back(unquote(tok.text));
              break;
            }
        }
        t.constraints.push_back(copy);
        add_implicit_indexes(t, copy, s.source_id);
      }
      for (const auto& dropped : s.dropped_columns)
        t.columns.erase(std::remove_if(t.columns.begin(), t.columns.end(),
                                       [&](const ColumnDecl& c) { return iequals(c.name, dropped); }),
                        t.columns.end());
      for (const auto& dropped : s.dropped_constraints)
        t.constraints.erase(
            std::remove_if(t.constraints.begin(), t.constraints.end(),
                           [&](const ConstraintDecl& c) { return c.name && iequals(*c.name, dropped); }),
            t.constraints.end());
    } else if (s.kind == StatementKind::CreateIndex && !s.index_columns.empty()) {
      IndexDecl idx;
      idx.name = s.index_name.value_or("");
      idx.columns = s.index_columns;
      idx.source_id = s.source_id;
      idx.unique = s.unique_index;
      if (s.target_table) {
        TableSchema& t = table(*s.target_table);
        bool dup = std::any_of(t.indexes.begin(), t.indexes.end(), [&](const IndexDecl& i) {
          return !idx.name.empty() && iequals(i.name, idx.name);
        });
        if (!dup) t.indexes.push_back(idx);
      } else {
        pending_.push_back(idx);
      }
    }
  }

  // Indexes declared without ON: attach to the only table whose known columns
  // contain every index column.
  void resolve_pending() {
    for (const auto& idx : pending_) {
      std::vector<TableSchema*> hits;
      for (auto& [key, t] : ctx_.schemas) {
        bool all = !t.columns.empty() &&
                   std::all_of(idx.columns.begin(), idx.columns.end(),
                               [&](const std::string& c) { return t.has_column(c); });
        if (all) hits.push_back(&t);
      }
      if (hits.size() == 1) {
        hits.front()->indexes.push_back(idx);
      } else {
        ctx_.warnings.push_back("index " + (idx.name.empty() ? std::string("<unnamed>") : idx.name) +
                                " (" + idx.source_id + ") has no ON clause and " +
                                (hits.empty() ? "matches no known table" : "matches several tables") +
                                "; ignored");
      }
    }
  }

  std::string schema_name(const std::string& t) const {
    const TableSchema* s = ctx_.table(t);
    return s ? s->name : t;
  }

  void harvest_joins(const AnnotatedStatement& s) {
    if (s.kind != StatementKind::Select && s.kind != StatementKind::Update &&
        s.kind != StatementKind::Delete && s.kind != StatementKind::Insert)
      return;
    for (const auto& p : s.predicates) {
      if (!p.rhs_column || (p.op != "=" && p.op != "==")) continue;
      ColumnRef a{schema_name(p.column.table), p.column.column};
      ColumnRef b{schema_name(p.rhs_column->table), p.rhs_column->column};
      if (a.table.empty() || b.table.empty() || a.same_as(b)) continue;
      if (canonical(b.table) < canonical(a.table) ||
          (canonical(b.table) == canonical(a.table) && canonical(b.column) < canonical(a.column)))
        std::swap(a, b);
      if (ctx_.joined(a, b)) continue;
      ctx_.join_graph.push_back(JoinEdge{a, b, s.source_id, s.ordinal});
    }
  }

  void load_dataset(DatasetAdapter& data) {
    // Stored DDL fills in tables the workload does not declare.
    for (const auto& sql : data.ddl())
      for (const auto& raw : split_statements(sql, data.describe())) apply_ddl(parse(raw), false);
    resolve_pending();
    pending_.clear();

    for (const auto& name : data.tables()) {
      SampledTable sample = sample_table(data, name, ctx_.config);
      TableSchema& t = table(name);
      // Augment: columns seen in the data but unknown to the schema.
      std::vector<ColumnProfile> profiles;
      {
        SampledTable typed = sample;
        for (std::size_t i = 0; i < typed.columns.size(); ++i) {
          const ColumnDecl* decl = t.column(typed.columns[i]);
          if (decl && i < typed.declared_types.size()) typed.declared_types[i] = decl->declared_type;
        }
        profiles = profile_sample(typed);
        sample = typed;
      }
      for (std::size_t i = 0; i < sample.columns.size(); ++i) {
        if (t.has_column(sample.columns[i])) continue;
        ColumnDecl c;
        c.name = sample.columns[i];
        c.declared_type = i < sample.declared_types.size() && !sample.declared_types[i].empty()
                              ? sample.declared_types[i]
                              : std::string(to_string(profiles[i].inferred_value_class));
        c.nullable = true;
        t.columns.push_back(c);
        profiles[i].declared_type = c.declared_type;
        if (i < sample.declared_types.size()) sample.declared_types[i] = c.declared_type;
      }
      t.from_data = true;
      for (auto& p : profiles) {
        p.table = t.name;
        ctx_.profiles[{canonical(t.name), canonical(p.column)}] = std::move(p);
      }
      sample.name = t.name;
      ctx_.samples[canonical(t.name)] = std::move(sample);
    }
  }

  std::vector<IndexDecl> pending_;

 private:
  ApplicationContext& ctx_;
};

void fnv(std::uint64_t& h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= 0xff;
  h *= 1099511628211ULL;
}

std::string snapshot_of(const ApplicationContext& ctx) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& s : ctx.query_registry) fnv(h, s.text());
  for (const auto& [key, t] : ctx.schemas) {
    fnv(h, key);
    for (const auto& c : t.columns) fnv(h, c.name + ":" + c.declared_type);
    for (const auto& i : t.indexes) fnv(h, i.name);
  }
  for (const auto& [key, p] : ctx.profiles) {
    fnv(h, key.first + "." + key.second);
    fnv(h, std::to_string(p.row_count_sampled) + "/" + std::to_string(p.distinct_count));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ApplicationContext build_context(std::vector<AnnotatedStatement> queries, DatasetAdapter* dataset,
                                 const BuildConfig& config) {
  ApplicationContext ctx;
  ctx.config = config;
  for (std::size_t i = 0; i < queries.size(); ++i) queries[i].ordinal = i;
  ctx.query_registry = std::move(queries);

  Builder b(ctx);
  for (const auto& s : ctx.query_registry) b.apply_ddl(s, true);
  if (dataset) {
    try {
      b.load_dataset(*dataset);
      ctx.has_dataset = true;
    } catch (const DatasetError& e) {
      ctx.warnings.push_back(std::string("dataset unavailable, DDL-only mode: ") + e.what());
      ctx.profiles.clear();
      ctx.samples.clear();
    }
  }
  b.resolve_pending();
  for (const auto& s : ctx.query_registry) b.harvest_joins(s);
  ctx.snapshot = snapshot_of(ctx);
  return ctx;
}

bool statement_touches(const AnnotatedStatement& stmt, const ApplicationContext& ctx,
                       std::string_view table, std::string_view column) {
  bool on_table = stmt.references_table(table) ||
                  (stmt.target_table && iequals(*stmt.target_table, table));
  if (!on_table && stmt.kind == StatementKind::CreateIndex && !stmt.target_table &&
      stmt.index_name) {
    // Index declared without ON: owned by whichever table adopted it.
    if (const TableSchema* t = ctx.table(table))
      on_table = std::any_of(t->indexes.begin(), t->indexes.end(), [&](const IndexDecl& i) {
        return i.source_id == stmt.source_id && iequals(i.name, *stmt.index_name);
      });
  }
  if (!on_table) return false;
  if (column.empty()) return true;

  std::string target = stmt.resolve_qualifier(table);
  for (const auto& c : stmt.columns_referenced)
    if (iequals(c.column, column) &&
        (c.table.empty() || iequals(c.table, table) || iequals(c.table, target)))
      return true;
  for (const auto& p : stmt.predicates)
    if (iequals(p.column.column, column) || (p.rhs_column && iequals(p.rhs_column->column, column)))
      return true;
  // Implicit references: SELECT * and INSERT without a column list.
  if (stmt.has_wildcard_projection) return true;
  if (stmt.kind == StatementKind::Insert && !stmt.has_clause(ClauseRole::ColumnList)) return true;
  for (const auto& d : stmt.dropped_columns)
    if (iequals(d, column)) return true;
  for (const auto& c : stmt.constraints)
    for (const auto& x : c.columns)
      if (iequals(x, column)) return true;
  if (stmt.kind == StatementKind::CreateIndex)
    for (const auto& c : stmt.index_columns)
      if (iequals(c, column)) return true;
  // CHECK expression text mentions the column.
  for (const auto& c : stmt.constraints)
    if (c.expression_text) {
      auto lexed = tokenize(*c.expression_text);
      for (const auto& t : lexed.tokens)
        if (t.kind == TokenKind::Identifier && iequals(unquote(t.text), column)) return true;
    }
  return false;
}

std::vector<AnnotatedStatement> impacted_queries(const ApplicationContext& ctx,
                                                 const Finding& finding) {
  std::vector<AnnotatedStatement> out;
  if (finding.location.table.empty()) return out;
  for (const auto& s : ctx.query_registry)
    if (statement_touches(s, ctx, finding.location.table, finding.location.column))
      out.push_back(s);
  return out;
}

}  // namespace sqlsmell
