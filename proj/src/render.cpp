// ---------------------------------------------------------------------------
// render.cpp
//
// Token list -> SQL text, token-range edits, and annotation-level equality
// used by the round-trip checks.
// ---------------------------------------------------------------------------
#include "sqlsmell/frontend.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <type_traits>

namespace sqlsmell {

namespace {

constexpr std::size_t kInvalid = std::numeric_limits<std::size_t>::max();

void check_spans(const AnnotatedStatement& stmt) {
  const std::size_t n = stmt.tokens.size();
  auto check = [&](const Span& sp, std::string_view what) {
    if (sp.begin > sp.end || sp.end > n)
      throw RenderError("inconsistent " + std::string(what) + " span in statement " +
                        stmt.source_id);
  };
  for (const auto& [role, spans] : stmt.clauses) {
    std::vector<Span> sorted = spans;
    for (const auto& sp : sorted) check(sp, to_string(role));
  }
  for (const auto& c : stmt.constraints) check(c.span, "constraint");
  for (const auto& c : stmt.column_defs) check(c.span, "column");
}

}  // namespace

std::string render(const AnnotatedStatement& stmt) {
  check_spans(stmt);
  std::string out;
  for (std::size_t i = 0; i < stmt.tokens.size(); ++i) {
    const Token& t = stmt.tokens[i];
    if (t.kind == TokenKind::Whitespace) {
      if (out.empty() || i + 1 == stmt.tokens.size()) continue;
      out += t.text.find('\n') != std::string::npos ? "\n" : " ";
      continue;
    }
    out += t.text;
    // A line comment must stay terminated.
    if (t.kind == TokenKind::Comment && t.text.rfind("--", 0) == 0 &&
        (t.text.empty() || t.text.back() != '\n') && i + 1 < stmt.tokens.size() &&
        stmt.tokens[i + 1].kind != TokenKind::Whitespace)
      out += "\n";
  }
  while (!out.empty() && (out.back() == ' ' || out.back() == '\n')) out.pop_back();
  return out;
}

AnnotatedStatement apply_edits(const AnnotatedStatement& stmt, std::vector<TokenEdit> edits) {
  std::sort(edits.begin(), edits.end(),
            [](const TokenEdit& a, const TokenEdit& b) { return a.range.begin < b.range.begin; });
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const Span& r = edits[i].range;
    if (r.begin > r.end || r.end > stmt.tokens.size())
      throw RenderError("edit range outside statement " + stmt.source_id);
    if (i > 0 && edits[i - 1].range.end > r.begin)
      throw RenderError("overlapping edits in statement " + stmt.source_id);
  }

  AnnotatedStatement out = stmt;
  out.tokens.clear();
  // old index -> new index for token boundaries
  std::vector<std::size_t> remap(stmt.tokens.size() + 1, kInvalid);
  std::size_t cursor = 0;
  for (const auto& e : edits) {
    for (; cursor < e.range.begin; ++cursor) {
      remap[cursor] = out.tokens.size();
      out.tokens.push_back(stmt.tokens[cursor]);
    }
    remap[e.range.begin] = out.tokens.size();
    auto lexed = tokenize(e.replacement);
    if (!lexed.ok) throw RenderError("replacement text does not tokenize: " + e.replacement);
    out.tokens.insert(out.tokens.end(), lexed.tokens.begin(), lexed.tokens.end());
    cursor = e.range.end;
    // Interior boundaries stay invalid; the end boundary maps past the
    // replacement.
    if (cursor < remap.size()) remap[cursor] = out.tokens.size();
  }
  for (; cursor < stmt.tokens.size(); ++cursor) {
    remap[cursor] = out.tokens.size();
    out.tokens.push_back(stmt.tokens[cursor]);
  }
  remap[stmt.tokens.size()] = out.tokens.size();

  // nullopt: the span lies inside a replaced range and disappears with it.
  auto shift = [&](Span sp) -> std::optional<Span> {
    for (const auto& e : edits) {
      if (e.range == sp) return Span{remap[sp.begin], remap[sp.end]};
      bool overlaps = sp.begin < e.range.end && e.range.begin < sp.end;
      bool contains = sp.begin <= e.range.begin && e.range.end <= sp.end;
      bool inside = e.range.begin <= sp.begin && sp.end <= e.range.end;
      if (inside && !sp.empty()) return std::nullopt;
      // A span that only partly covers an edit is invalidated.
      if (overlaps && !contains) return Span{kInvalid, 0};
    }
    std::size_t b = sp.begin < remap.size() ? remap[sp.begin] : kInvalid;
    std::size_t e = sp.end < remap.size() ? remap[sp.end] : kInvalid;
    if (b == kInvalid || e == kInvalid) return Span{kInvalid, 0};
    return Span{b, e};
  };
  for (auto& [role, spans] : out.clauses) {
    std::vector<Span> kept;
    for (const auto& sp : spans)
      if (auto moved = shift(sp)) kept.push_back(*moved);
    spans = std::move(kept);
  }
  auto shift_all = [&](auto& items, auto get) {
    using Item = typename std::decay_t<decltype(items)>::value_type;
    std::vector<Item> kept;
    for (auto& item : items) {
      bool keep = true;
      for (Span* sp : get(item)) {
        auto moved = shift(*sp);
        if (!moved) keep = false;
        else *sp = *moved;
      }
      if (keep) kept.push_back(std::move(item));
    }
    items = std::move(kept);
  };
  shift_all(out.constraints, [](ConstraintDecl& c) { return std::vector<Span*>{&c.span}; });
  shift_all(out.column_defs, [](ColumnDecl& c) { return std::vector<Span*>{&c.span}; });
  shift_all(out.predicates, [](Predicate& p) { return std::vector<Span*>{&p.span, &p.rhs}; });
  return out;
}

AnnotatedStatement rewrite(const AnnotatedStatement& stmt, std::vector<TokenEdit> edits) {
  AnnotatedStatement edited = apply_edits(stmt, std::move(edits));
  AnnotatedStatement out = parse(render(edited), stmt.source_id);
  out.ordinal = stmt.ordinal;
  return out;
}

bool same_annotations(const AnnotatedStatement& a, const AnnotatedStatement& b) {
  if (a.kind != b.kind || a.diagnostic != b.diagnostic) return false;
  if (a.has_wildcard_projection != b.has_wildcard_projection || a.join_count != b.join_count ||
      a.distinct_present != b.distinct_present || a.unique_index != b.unique_index)
    return false;

  auto roles = [](const AnnotatedStatement& s) {
    std::vector<std::pair<ClauseRole, std::vector<std::string>>> out;
    for (const auto& [role, spans] : s.clauses) {
      std::vector<std::string> texts;
      for (const auto& sp : spans) texts.push_back(s.text_of(sp));
      if (!texts.empty()) out.emplace_back(role, texts);
    }
    return out;
  };
  if (roles(a) != roles(b)) return false;

  auto names = [](const std::vector<std::string>& v) {
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(canonical(x));
    return out;
  };
  if (names(a.tables_referenced) != names(b.tables_referenced)) return false;
  if (a.columns_referenced.size() != b.columns_referenced.size()) return false;
  for (std::size_t i = 0; i < a.columns_referenced.size(); ++i)
    if (!a.columns_referenced[i].same_as(b.columns_referenced[i])) return false;

  if (a.constraints.size() != b.constraints.size()) return false;
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const auto& x = a.constraints[i];
    const auto& y = b.constraints[i];
    if (x.kind != y.kind || names(x.columns) != names(y.columns) ||
        x.name.has_value() != y.name.has_value() || x.target.has_value() != y.target.has_value() ||
        x.expression_text != y.expression_text || x.inline_decl != y.inline_decl)
      return false;
    if (x.name && !iequals(*x.name, *y.name)) return false;
    if (x.target && !x.target->same_as(*y.target)) return false;
  }
  if (a.column_defs.size() != b.column_defs.size()) return false;
  for (std::size_t i = 0; i < a.column_defs.size(); ++i) {
    const auto& x = a.column_defs[i];
    const auto& y = b.column_defs[i];
    if (!iequals(x.name, y.name) || x.declared_type != y.declared_type || x.nullable != y.nullable)
      return false;
  }
  if (a.predicates.size() != b.predicates.size()) return false;
  for (std::size_t i = 0; i < a.predicates.size(); ++i)
    if (a.predicates[i].op != b.predicates[i].op ||
        !a.predicates[i].column.same_as(b.predicates[i].column))
      return false;

  auto opt_eq = [](const std::optional<std::string>& x, const std::optional<std::string>& y) {
    return x.has_value() == y.has_value() && (!x || iequals(*x, *y));
  };
  return opt_eq(a.target_table, b.target_table) && opt_eq(a.index_name, b.index_name) &&
         names(a.index_columns) == names(b.index_columns) &&
         names(a.dropped_columns) == names(b.dropped_columns) &&
         names(a.dropped_constraints) == names(b.dropped_constraints);
}

}  // namespace sqlsmell
