#include "sqlsmell/repair.hpp"

#include "repair_rules.hpp"

#include <algorithm>
#include <map>

namespace sqlsmell {

std::string_view to_string(TransformOp op) {
  switch (op) {
    case TransformOp::RewriteExisting: return "rewrite";
    case TransformOp::CreateNew: return "create";
    case TransformOp::Annotate: return "annotate";
  }
  return "?";
}

namespace {

std::map<ApKind, RepairRule>& rules() {
  static std::map<ApKind, RepairRule> table = [] {
    std::map<ApKind, RepairRule> out;
    for (auto& r : detail::builtin_repair_rules()) out.emplace(r.kind, std::move(r));
    return out;
  }();
  return table;
}

// Empty when the transformation is acceptable, else the reason.
std::string validate(const StatementTransformation& t, const std::vector<std::string>& to_transform,
                     const ApplicationContext& ctx) {
  if (t.op == TransformOp::Annotate) return {};
  if (t.rendered.empty()) return "empty SQL for " + t.target;
  AnnotatedStatement reparsed = parse(t.rendered, t.target);
  if (reparsed.diagnostic || reparsed.kind == StatementKind::Other)
    return "generated SQL does not parse: " + t.rendered;
  if (t.op == TransformOp::RewriteExisting) {
    if (std::find(to_transform.begin(), to_transform.end(), t.target) == to_transform.end())
      return "rewrite of " + t.target + " outside the impacted set";
    for (const auto& s : ctx.query_registry)
      if (s.source_id == t.target && s.kind != reparsed.kind)
        return "rewrite of " + t.target + " changed the statement kind";
  }
  return {};
}

}  // namespace

const RepairRule& repair_rule(ApKind kind) { return rules().at(kind); }

void register_repair_rule(RepairRule rule) {
  if (!rule.textual) rule.textual = rules().at(rule.kind).textual;
  rules()[rule.kind] = std::move(rule);
}

std::string textual_fix(const Finding& finding, const ApplicationContext& ctx) {
  return repair_rule(finding.kind).textual(finding, ctx);
}

std::vector<RepairPlan> fix(const std::vector<RankedFinding>& findings,
                            const ApplicationContext& ctx, const RepairOptions& options) {
  std::vector<RepairPlan> plans;
  plans.reserve(findings.size());
  for (const auto& rf : findings) {
    RepairPlan plan;
    plan.finding = rf.finding;
    plan.score = rf.score;
    const Finding& f = rf.finding;

    std::vector<const AnnotatedStatement*> z;
    for (const auto& s : ctx.query_registry)
      if (!f.location.statement_id.empty() && s.source_id == f.location.statement_id) {
        z.push_back(&s);
        plan.to_transform.push_back(s.source_id);
      }
    for (const auto& s : ctx.query_registry) {
      if (f.location.table.empty() ||
          !statement_touches(s, ctx, f.location.table, f.location.column))
        continue;
      plan.impacted.push_back(s.source_id);
      if (std::find(plan.to_transform.begin(), plan.to_transform.end(), s.source_id) ==
          plan.to_transform.end()) {
        z.push_back(&s);
        plan.to_transform.push_back(s.source_id);
      }
    }

    const RepairRule& rule = repair_rule(f.kind);
    if (rule.transform && !f.suppressed_by_context) {
      try {
        if (auto out = rule.transform(RepairInput{f, z, ctx, options});
            out && !out->transformations.empty()) {
          std::string problem;
          for (const auto& t : out->transformations)
            if (problem.empty()) problem = validate(t, plan.to_transform, ctx);
          if (problem.empty()) {
            plan.transformations = std::move(out->transformations);
            plan.notes = std::move(out->notes);
          } else {
            plan.notes.push_back("automated rewrite rejected: " + problem);
          }
        }
      } catch (const RenderError& e) {
        plan.notes.push_back(std::string("automated rewrite failed: ") + e.what());
      }
    }
    if (plan.transformations.empty()) plan.textual_fix = rule.textual(f, ctx);
    plans.push_back(std::move(plan));
  }

  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (!plans[i].automated() || plans[i].finding.location.table.empty()) continue;
    for (std::size_t j = i + 1; j < plans.size(); ++j) {
      if (!plans[j].automated() ||
          canonical(plans[i].finding.location.table) != canonical(plans[j].finding.location.table))
        continue;
      plans[i].conflicts_with.push_back(j);
      plans[j].conflicts_with.push_back(i);
    }
  }
  for (auto& p : plans) std::sort(p.conflicts_with.begin(), p.conflicts_with.end());
  return plans;
}

std::vector<RawStatement> apply_plan(const std::vector<AnnotatedStatement>& registry,
                                     const RepairPlan& plan) {
  std::map<std::string, std::string> rewrites;
  for (const auto& t : plan.transformations)
    if (t.op == TransformOp::RewriteExisting) rewrites[t.target] = t.rendered;
  std::vector<RawStatement> out;
  for (const auto& s : registry) {
    auto it = rewrites.find(s.source_id);
    out.push_back({it != rewrites.end() ? it->second : s.text(), s.source_id});
  }
  for (const auto& t : plan.transformations)
    if (t.op == TransformOp::CreateNew) out.push_back({t.rendered, t.target});
  return out;
}

}  // namespace sqlsmell
