// Contextual rules: need the schema map, the join graph or the whole
// workload.
#include "rules.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace sqlsmell::detail {

using SK = StatementKind;

namespace {

// Resolves the table of a column reference against the schemas. Unqualified
// columns in multi-table statements resolve when exactly one referenced
// table declares them.
ColumnRef resolve(const AnnotatedStatement& s, const ApplicationContext& ctx, ColumnRef ref) {
  if (!ref.table.empty()) {
    if (const TableSchema* t = ctx.table(ref.table)) ref.table = t->name;
    return ref;
  }
  const TableSchema* hit = nullptr;
  for (const auto& name : s.tables_referenced) {
    const TableSchema* t = ctx.table(name);
    if (t && t->has_column(ref.column)) {
      if (hit) return ref;
      hit = t;
    }
  }
  if (hit) ref.table = hit->name;
  return ref;
}

bool selective(const Predicate& p) {
  static const std::set<std::string, std::less<>> ops = {"=", "==", "<", ">", "<=", ">=",
                                                         "BETWEEN", "IN"};
  return p.clause == ClauseRole::Where && !p.rhs_column && ops.count(p.op) > 0;
}

bool is_dml(const AnnotatedStatement& s) {
  return s.kind == SK::Select || s.kind == SK::Update || s.kind == SK::Delete;
}

// Selective predicate columns of a statement, resolved, deduplicated.
std::vector<ColumnRef> selective_columns(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  std::vector<ColumnRef> out;
  if (!is_dml(s)) return out;
  for (const auto& p : s.predicates) {
    if (!selective(p)) continue;
    ColumnRef c = resolve(s, ctx, p.column);
    if (c.table.empty()) continue;
    if (std::none_of(out.begin(), out.end(), [&](const ColumnRef& x) { return x.same_as(c); }))
      out.push_back(c);
  }
  return out;
}

bool is_key_column(const TableSchema& t, std::string_view column) {
  for (const auto& c : t.constraints)
    if ((c.kind == ConstraintKind::PrimaryKey || c.kind == ConstraintKind::Unique) &&
        c.columns.size() == 1 && iequals(c.columns.front(), column))
      return true;
  for (const auto& i : t.indexes)
    if (i.unique && i.columns.size() == 1 && iequals(i.columns.front(), column)) return true;
  return false;
}

bool fk_between(const TableSchema& from, std::string_view column, const TableSchema& to) {
  const ConstraintDecl* fk = from.foreign_key_on(column);
  return fk && fk->target && iequals(fk->target->table, to.name);
}

std::vector<Finding> no_foreign_key(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  std::vector<Finding> out;
  for (const auto& e : ctx.join_graph) {
    if (e.ordinal != s.ordinal || e.source_id != s.source_id) continue;
    const TableSchema* ta = ctx.table(e.left.table);
    const TableSchema* tb = ctx.table(e.right.table);
    if (!ta || !tb || !ta->from_ddl || !tb->from_ddl) continue;
    if (!ta->has_column(e.left.column) || !tb->has_column(e.right.column)) continue;
    if (fk_between(*ta, e.left.column, *tb) || fk_between(*tb, e.right.column, *ta)) continue;
    bool a_key = is_key_column(*ta, e.left.column);
    bool b_key = is_key_column(*tb, e.right.column);
    if (!a_key && !b_key) continue;  // no side can be referenced
    // The finding sits on the referencing (non-key) side.
    const ColumnRef& child = b_key ? e.left : e.right;
    const ColumnRef& parent = b_key ? e.right : e.left;
    Finding f = statement_finding(ApKind::NoForeignKey, s, Phase::InterQuery,
                                  "join " + child.display() + " = " + parent.display() +
                                      " but neither table declares a foreign key between them");
    f.location.table = child.table;
    f.location.column = child.column;
    f.location.related = parent;
    f.confidence = Confidence::High;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> no_primary_key(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  if (!s.target_table) return {};
  const TableSchema* t = ctx.table(*s.target_table);
  if (!t || t->has_primary_key() || t->source_ids.empty() || t->source_ids.front() != s.source_id)
    return {};
  Finding f = statement_finding(ApKind::NoPrimaryKey, s, Phase::InterQuery,
                                "table " + t->name + " has no PRIMARY KEY in any of its DDL");
  f.location.table = t->name;
  return {f};
}

std::vector<Finding> index_underuse(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  std::vector<Finding> out;
  for (const auto& col : selective_columns(s, ctx)) {
    const TableSchema* t = ctx.table(col.table);
    if (!t) continue;
    bool covered = std::any_of(t->indexes.begin(), t->indexes.end(), [&](const IndexDecl& i) {
      return !i.columns.empty() && iequals(i.columns.front(), col.column);
    });
    if (covered) continue;
    std::vector<const AnnotatedStatement*> users;
    for (const auto& q : ctx.query_registry) {
      auto cols = selective_columns(q, ctx);
      if (std::any_of(cols.begin(), cols.end(), [&](const ColumnRef& c) { return c.same_as(col); }))
        users.push_back(&q);
    }
    if (users.size() < ctx.config.index_use_min || users.front()->ordinal != s.ordinal) continue;
    std::string ids;
    for (const auto* q : users) ids += (ids.empty() ? "" : ", ") + q->source_id;
    Finding f = statement_finding(ApKind::IndexUnderuse, s, Phase::InterQuery,
                                  col.display() + " is filtered on in " + std::to_string(users.size()) +
                                      " statements (" + ids + ") but no index leads with it");
    f.location.table = t->name;
    f.location.column = col.column;
    out.push_back(std::move(f));
  }
  return out;
}

// Number of leading index columns that are all in `preds`.
std::size_t prefix_len(const IndexDecl& idx, const std::vector<ColumnRef>& preds) {
  std::size_t n = 0;
  for (const auto& c : idx.columns) {
    bool in = std::any_of(preds.begin(), preds.end(),
                          [&](const ColumnRef& p) { return iequals(p.column, c); });
    if (!in) break;
    ++n;
  }
  return n;
}

std::vector<Finding> index_overuse(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  if (!s.index_name) return {};
  // Locate the table that owns this index declaration.
  const TableSchema* owner = nullptr;
  const IndexDecl* target = nullptr;
  for (const auto& [key, t] : ctx.schemas)
    for (const auto& i : t.indexes)
      if (i.source_id == s.source_id && iequals(i.name, *s.index_name)) {
        owner = &t;
        target = &i;
      }
  if (!owner) return {};

  bool best_somewhere = false;
  bool touched = false;
  std::vector<std::string> winners;
  for (const auto& q : ctx.query_registry) {
    std::vector<ColumnRef> preds;
    for (const auto& c : selective_columns(q, ctx))
      if (iequals(c.table, owner->name)) preds.push_back(c);
    if (preds.empty()) continue;
    if (prefix_len(*target, preds) > 0) touched = true;
    // Best index: longest usable prefix; ties prefer the primary key, then
    // the narrower index, then declaration order.
    const IndexDecl* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& i : owner->indexes) {
      std::size_t len = prefix_len(i, preds);
      if (len == 0) continue;
      bool better = !best || len > best_len ||
                    (len == best_len && i.primary && !best->primary) ||
                    (len == best_len && i.primary == best->primary &&
                     i.columns.size() < best->columns.size());
      if (better) {
        best = &i;
        best_len = len;
      }
    }
    if (best == target) best_somewhere = true;
    else if (best && prefix_len(*target, preds) > 0) winners.push_back(best->name + " for " + q.source_id);
  }
  if (best_somewhere || !touched) return {};
  std::string why;
  for (const auto& w : winners) why += (why.empty() ? "" : "; ") + w;
  Finding f = statement_finding(ApKind::IndexOveruse, s, Phase::InterQuery,
                                "index " + target->name + " is not the best access path for any "
                                "statement of the workload (" + why + ")");
  f.location.table = owner->name;
  f.location.column = target->columns.front();
  f.location.object = target->name;
  return {f};
}

// "orders_2019" -> ("orders", true)
std::pair<std::string, bool> numbered_base(const std::string& name, bool need_underscore) {
  static const std::regex with("^(.+)_(\\d+)$");
  static const std::regex without("^(.*[^\\d_])_?(\\d+)$");
  std::smatch m;
  if (std::regex_match(name, m, need_underscore ? with : without)) return {canonical(m[1].str()), true};
  return {"", false};
}

std::vector<Finding> clone_table(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  if (!s.target_table) return {};
  auto [base, ok] = numbered_base(unquote(*s.target_table), true);
  if (!ok) return {};
  std::vector<const TableSchema*> members;
  for (const auto& [key, t] : ctx.schemas) {
    if (!t.from_ddl) continue;
    auto [b, match] = numbered_base(t.name, true);
    if (match && b == base) members.push_back(&t);
  }
  if (members.size() < 2) return {};
  // Anchor at the earliest declaration among the members.
  const TableSchema* first = *std::min_element(members.begin(), members.end(), [](auto* a, auto* b) {
    return a->first_ordinal.value_or(SIZE_MAX) < b->first_ordinal.value_or(SIZE_MAX);
  });
  if (first->source_ids.empty() || first->source_ids.front() != s.source_id) return {};
  std::string names;
  for (const auto* m : members) names += (names.empty() ? "" : ", ") + m->name;
  Finding f = statement_finding(ApKind::CloneTable, s, Phase::InterQuery,
                                std::to_string(members.size()) + " tables share the base name '" +
                                    base + "' with numeric suffixes: " + names);
  f.location.table = first->name;
  f.location.object = names;
  return {f};
}

std::vector<Finding> data_in_metadata(const AnnotatedStatement& s, const ApplicationContext& ctx) {
  if (!s.target_table) return {};
  const TableSchema* t = ctx.table(*s.target_table);
  if (!t || t->source_ids.empty() || t->source_ids.front() != s.source_id) return {};
  std::map<std::string, std::vector<std::string>> groups;
  std::vector<std::string> order;
  for (const auto& c : t->columns) {
    auto [base, ok] = numbered_base(unquote(c.name), false);
    if (!ok) continue;
    if (!groups.count(base)) order.push_back(base);
    groups[base].push_back(c.name);
  }
  std::vector<Finding> out;
  for (const auto& base : order) {
    const auto& cols = groups[base];
    if (cols.size() < 2) continue;
    std::string names;
    for (const auto& c : cols) names += (names.empty() ? "" : ", ") + c;
    Finding f = statement_finding(ApKind::DataInMetadata, s, Phase::InterQuery,
                                  "columns " + names + " encode an index in the column name");
    f.location.table = t->name;
    f.location.column = cols.front();
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> adjacency_list(const AnnotatedStatement& s, const ApplicationContext&) {
  std::vector<Finding> out;
  if (!s.target_table) return out;
  for (const auto& c : s.constraints) {
    if (c.kind != ConstraintKind::ForeignKey || !c.target) continue;
    if (!iequals(unquote(c.target->table), unquote(*s.target_table))) continue;
    std::string col = c.columns.empty() ? "" : c.columns.front();
    Finding f = statement_finding(ApKind::AdjacencyList, s, Phase::InterQuery,
                                  "foreign key " + *s.target_table + "." + col +
                                      " references its own table (parent pointer tree)");
    f.location.column = col;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> enumerated_types(const AnnotatedStatement& s, const ApplicationContext&) {
  std::vector<Finding> out;
  if (!s.target_table) return out;
  for (const auto& c : s.constraints) {
    if (c.kind != ConstraintKind::Check || !c.expression_text) continue;
    auto lexed = tokenize(*c.expression_text);
    std::vector<const Token*> sig;
    for (const auto& t : lexed.tokens)
      if (!t.trivia()) sig.push_back(&t);
    // col IN ('a', 'b', ...)
    if (sig.size() < 5 || sig[0]->kind != TokenKind::Identifier || !sig[1]->is_word("IN") ||
        !sig[2]->is_punct('(') || !sig.back()->is_punct(')'))
      continue;
    std::vector<std::string> values;
    bool all_literals = true;
    for (std::size_t i = 3; i + 1 < sig.size(); ++i) {
      if (sig[i]->is_punct(',')) continue;
      if (sig[i]->kind != TokenKind::Literal) all_literals = false;
      values.push_back(sig[i]->text);
    }
    if (!all_literals || values.size() < 2) continue;
    std::string list;
    for (const auto& v : values) list += (list.empty() ? "" : ", ") + v;
    Finding f = statement_finding(ApKind::EnumeratedTypes, s, Phase::InterQuery,
                                  "CHECK constraint restricts " + unquote(sig[0]->text) +
                                      " to a fixed list (" + list + ")");
    f.location.column = unquote(sig[0]->text);
    f.location.object = c.name.value_or("");
    f.confidence = Confidence::High;
    out.push_back(std::move(f));
  }
  for (const auto& c : s.column_defs) {
    if (c.declared_type.size() < 5 || !iequals(c.declared_type.substr(0, 4), "ENUM")) continue;
    Finding f = statement_finding(ApKind::EnumeratedTypes, s, Phase::InterQuery,
                                  "column " + c.name + " declared " + c.declared_type);
    f.location.column = c.name;
    f.confidence = Confidence::High;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<DetectionRule> inter_rules() {
  const std::vector<SK> dml = {SK::Select, SK::Update, SK::Delete};
  const std::vector<SK> ddl = {SK::CreateTable, SK::AlterTable};
  return {
      {ApKind::NoPrimaryKey, "no-primary-key", Phase::InterQuery, {SK::CreateTable}, no_primary_key},
      {ApKind::NoForeignKey, "join-without-fk", Phase::InterQuery,
       {SK::Select, SK::Insert, SK::Update, SK::Delete}, no_foreign_key},
      {ApKind::DataInMetadata, "numbered-columns", Phase::InterQuery, {SK::CreateTable}, data_in_metadata},
      {ApKind::AdjacencyList, "self-reference", Phase::InterQuery, ddl, adjacency_list},
      {ApKind::EnumeratedTypes, "check-in-list", Phase::InterQuery, ddl, enumerated_types},
      {ApKind::IndexOveruse, "redundant-index", Phase::InterQuery, {SK::CreateIndex}, index_overuse},
      {ApKind::IndexUnderuse, "missing-index", Phase::InterQuery, dml, index_underuse},
      {ApKind::CloneTable, "numbered-tables", Phase::InterQuery, {SK::CreateTable}, clone_table},
  };
}

}  // namespace sqlsmell::detail
