#include "sqlsmell/detect.hpp"

#include "rules.hpp"
#include "sqlsmell/profiler.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace sqlsmell {

bool DetectionRule::applies_to(StatementKind k) const {
  return std::find(applicable.begin(), applicable.end(), k) != applicable.end();
}

namespace {

std::vector<DetectionRule>& registry() {
  static std::vector<DetectionRule> rules = [] {
    std::vector<DetectionRule> all = detail::intra_rules();
    auto inter = detail::inter_rules();
    all.insert(all.end(), inter.begin(), inter.end());
    std::stable_sort(all.begin(), all.end(), [](const DetectionRule& a, const DetectionRule& b) {
      if (a.phase != b.phase) return a.phase < b.phase;
      return kind_id(a.kind) < kind_id(b.kind);
    });
    return all;
  }();
  return rules;
}

std::vector<Finding> run_phase(const AnnotatedStatement& stmt, const ApplicationContext& ctx,
                               Phase phase) {
  std::vector<Finding> out;
  for (const auto& rule : registry()) {
    if (rule.phase != phase || !rule.applies_to(stmt.kind)) continue;
    for (auto& f : rule.detect(stmt, ctx)) {
      f.kind = rule.kind;
      f.phase = phase;
      if (phase != Phase::IntraQuery) f.context_snapshot = ctx.snapshot;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::string percent(double x) {
  std::ostringstream out;
  out.precision(3);
  out << x * 100 << "%";
  return out.str();
}

void contextualize_mva(Finding& f, const ApplicationContext& ctx) {
  const TableSchema* t = ctx.table(f.location.table);
  const ColumnDecl* decl = t ? t->column(f.location.column) : nullptr;
  const ColumnProfile* p = ctx.profile(f.location.table, f.location.column);
  std::string declared = p ? p->declared_type : decl ? decl->declared_type : "";
  if (!declared.empty() && numeric_type(declared)) {
    f.suppressed_by_context = true;
    f.suppression_reason = "column is declared " + declared + ", which cannot hold a list";
    return;
  }
  if (!p) return;
  if (p->delimiter_list_fraction < ctx.config.mva_fraction) {
    f.suppressed_by_context = true;
    f.suppression_reason = "only " + percent(p->delimiter_list_fraction) +
                           " of sampled values are delimiter-separated lists";
    return;
  }
  f.confidence = Confidence::High;
  f.evidence += "; confirmed: " + percent(p->delimiter_list_fraction) +
                " of sampled values are delimiter-separated lists";
  f.context_snapshot = ctx.snapshot;
}

void contextualize_concat(Finding& f, const ApplicationContext& ctx) {
  if (!f.location.ordinal || *f.location.ordinal >= ctx.query_registry.size()) return;
  const auto& stmt = ctx.query_registry[*f.location.ordinal];
  auto cols = detail::concat_column_operands(stmt);
  if (cols.empty()) return;
  for (const auto& c : cols) {
    std::string table = c.table;
    if (table.empty()) {
      for (const auto& name : stmt.tables_referenced) {
        const TableSchema* t = ctx.table(name);
        if (t && t->has_column(c.column)) table = t->name;
      }
    }
    const TableSchema* t = ctx.table(table);
    if (!t || !t->not_null(c.column)) return;
  }
  f.suppressed_by_context = true;
  f.suppression_reason = "every concatenated column is declared NOT NULL";
  f.context_snapshot = ctx.snapshot;
}

}  // namespace

const std::vector<DetectionRule>& rule_registry() { return registry(); }

void register_rule(DetectionRule rule) { registry().push_back(std::move(rule)); }

std::vector<const DetectionRule*> rules_for_query(const AnnotatedStatement& stmt) {
  std::vector<const DetectionRule*> out;
  for (const auto& rule : registry())
    if (rule.applies_to(stmt.kind)) out.push_back(&rule);
  return out;
}

std::vector<Finding> detect_intra(const AnnotatedStatement& stmt, const BuildConfig& config) {
  ApplicationContext empty;
  empty.config = config;
  return run_phase(stmt, empty, Phase::IntraQuery);
}

std::vector<Finding> detect_inter(const AnnotatedStatement& stmt, const ApplicationContext& ctx) {
  return run_phase(stmt, ctx, Phase::InterQuery);
}

void apply_context(std::vector<Finding>& intra, const ApplicationContext& ctx) {
  for (auto& f : intra) {
    if (f.phase != Phase::IntraQuery) continue;
    if (f.kind == ApKind::MultiValuedAttribute) contextualize_mva(f, ctx);
    else if (f.kind == ApKind::ConcatenateNulls) contextualize_concat(f, ctx);
  }
}

std::vector<Finding> detect_all(const ApplicationContext& ctx, const DetectOptions& options) {
  const auto& q = ctx.query_registry;
  std::vector<std::vector<Finding>> intra(q.size());
  std::vector<std::vector<Finding>> inter(q.size());
  auto work = [&](std::size_t i) {
    intra[i] = run_phase(q[i], ctx, Phase::IntraQuery);
    if (options.inter) {
      apply_context(intra[i], ctx);
      inter[i] = run_phase(q[i], ctx, Phase::InterQuery);
    }
  };
  std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, q.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < q.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < q.size(); i += workers) work(i);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<Finding> out;
  for (auto& v : intra) std::move(v.begin(), v.end(), std::back_inserter(out));
  for (auto& v : inter) std::move(v.begin(), v.end(), std::back_inserter(out));

  if (options.data) {
    for (auto& d : data_rules(ctx)) {
      bool folded = false;
      if (d.kind == ApKind::MultiValuedAttribute || d.kind == ApKind::EnumeratedTypes) {
        for (auto& f : out) {
          if (f.kind != d.kind || f.suppressed_by_context ||
              !iequals(f.location.table, d.location.table) ||
              !iequals(f.location.column, d.location.column))
            continue;
          folded = true;
          f.confidence = Confidence::High;
          if (f.evidence.find("confirmed") == std::string::npos)
            f.evidence += "; confirmed by data: " + d.evidence;
          f.context_snapshot = ctx.snapshot;
        }
      }
      if (!folded) out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace sqlsmell
