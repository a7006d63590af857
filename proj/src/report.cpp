#include "sqlsmell/report.hpp"

#include <cstdio>
#include <sstream>

namespace sqlsmell {

using nlohmann::ordered_json;

namespace {

ordered_json weights_json(const Weights& w) {
  return ordered_json{{"rp", w.rp}, {"wp", w.wp}, {"m", w.m},
                      {"da", w.da}, {"di", w.di}, {"a", w.a}};
}

ordered_json thresholds_json(const BuildConfig& c) {
  return ordered_json{{"god_table_threshold", c.god_table_threshold},
                      {"join_threshold", c.join_threshold},
                      {"index_use_min", c.index_use_min},
                      {"mva_fraction", c.mva_fraction},
                      {"enum_distinct_max", c.enum_distinct_max},
                      {"enum_min_rows", c.enum_min_rows},
                      {"sample_size", c.sample_size},
                      {"sampling", c.sampling == Sampling::FirstN ? "first" : "seeded"},
                      {"seed", c.seed},
                      {"incorrect_type_share", c.incorrect_type_share},
                      {"denormalized_dup_ratio", c.denormalized_dup_ratio}};
}

ordered_json location_json(const Location& l) {
  ordered_json j;
  j["statement"] = l.statement_id.empty() ? ordered_json(nullptr) : ordered_json(l.statement_id);
  j["ordinal"] = l.ordinal ? ordered_json(*l.ordinal) : ordered_json(nullptr);
  j["table"] = l.table;
  j["column"] = l.column;
  j["object"] = l.object;
  if (l.related)
    j["related"] = ordered_json{{"table", l.related->table}, {"column", l.related->column}};
  else
    j["related"] = nullptr;
  return j;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string indent(std::string_view text, std::string_view prefix) {
  std::string out(prefix);
  for (char c : text) {
    out += c;
    if (c == '\n') out += prefix;
  }
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

ordered_json finding_json(const RepairPlan& plan, std::size_t rank) {
  const Finding& f = plan.finding;
  ordered_json j;
  j["rank"] = rank;
  j["kind"] = std::string(to_string(f.kind));
  j["category"] = std::string(to_string(f.category()));
  j["location"] = location_json(f.location);
  j["phase"] = std::string(to_string(f.phase));
  j["confidence"] = std::string(to_string(f.confidence));
  j["suppressed"] = f.suppressed_by_context;
  if (f.suppressed_by_context) j["suppression_reason"] = f.suppression_reason;
  j["evidence"] = f.evidence;

  ordered_json score;
  ordered_json terms = ordered_json::object();
  ordered_json contributions = ordered_json::object();
  if (plan.score) {
    for (Metric m : kMetrics) {
      auto i = static_cast<std::size_t>(m);
      terms[std::string(to_string(m))] = plan.score->terms[i];
      contributions[std::string(to_string(m))] = plan.score->contributions[i];
    }
  }
  score["terms"] = terms;
  score["contributions"] = contributions;
  score["total"] = plan.score ? plan.score->total : 0.0;
  j["score"] = score;

  ordered_json fx;
  fx["mode"] = plan.automated() ? "rewrite" : "textual";
  ordered_json statements = ordered_json::array();
  for (const auto& t : plan.transformations)
    statements.push_back(ordered_json{{"op", std::string(to_string(t.op))},
                                      {"target", t.target},
                                      {"edit", t.tree_edit},
                                      {"sql", t.rendered}});
  fx["statements"] = statements;
  fx["text"] = plan.textual_fix ? ordered_json(*plan.textual_fix) : ordered_json(nullptr);
  fx["notes"] = plan.notes;
  fx["impacted"] = plan.impacted;
  fx["to_transform"] = plan.to_transform;
  fx["conflicts_with"] = ordered_json::array();
  for (std::size_t c : plan.conflicts_with) fx["conflicts_with"].push_back(c + 1);
  j["fix"] = fx;
  return j;
}

ordered_json report_json(const Report& report) {
  ordered_json j;
  j["version"] = kReportVersion;
  ordered_json cfg;
  cfg["weights"] = weights_json(report.ranking.weights);
  cfg["thresholds"] = thresholds_json(report.thresholds);
  cfg["preset"] = report.ranking.preset.empty() ? ordered_json(nullptr)
                                                : ordered_json(report.ranking.preset);
  cfg["inter_query"] = std::string(to_string(report.ranking.inter_query_mode));
  j["config"] = cfg;

  ordered_json findings = ordered_json::array();
  ordered_json by_category = ordered_json::object();
  ordered_json by_kind = ordered_json::object();
  for (Category c : {Category::LogicalDesign, Category::PhysicalDesign, Category::Query,
                     Category::Data})
    by_category[std::string(to_string(c))] = 0;
  for (const auto& k : all_kinds()) by_kind[std::string(to_string(k.kind))] = 0;
  std::size_t suppressed = 0;
  for (std::size_t i = 0; i < report.plans.size(); ++i) {
    const auto& p = report.plans[i];
    findings.push_back(finding_json(p, i + 1));
    by_category[std::string(to_string(p.finding.category()))] =
        by_category[std::string(to_string(p.finding.category()))].get<std::size_t>() + 1;
    by_kind[std::string(to_string(p.finding.kind))] =
        by_kind[std::string(to_string(p.finding.kind))].get<std::size_t>() + 1;
    if (p.finding.suppressed_by_context) ++suppressed;
  }
  j["findings"] = findings;
  j["summary"] = ordered_json{{"total", report.plans.size()},
                              {"suppressed", suppressed},
                              {"by_category", by_category},
                              {"by_kind", by_kind}};
  j["warnings"] = report.warnings;
  return j;
}

std::string emit_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report_json(report).dump(2) + "\n";

  std::ostringstream out;
  const auto& w = report.ranking.weights;
  out << "sqlsmell report  preset=" << (report.ranking.preset.empty() ? "custom" : report.ranking.preset)
      << "  weights rp=" << w.rp << " wp=" << w.wp << " m=" << w.m << " da=" << w.da
      << " di=" << w.di << " a=" << w.a << "\n";
  for (const auto& warn : report.warnings) out << "warning: " << warn << "\n";
  if (report.plans.empty()) {
    out << "\nno anti-patterns found\n";
    return out.str();
  }
  out << "\n" << pad("#", 4) << pad("score", 8) << pad("kind", 24) << pad("category", 16)
      << "location\n";
  for (std::size_t i = 0; i < report.plans.size(); ++i) {
    const auto& p = report.plans[i];
    const Finding& f = p.finding;
    out << pad(std::to_string(i + 1), 4) << pad(fixed(p.score ? p.score->total : 0, 3), 8)
        << pad(std::string(to_string(f.kind)), 24)
        << pad(std::string(to_string(f.category())), 16) << f.location.display();
    if (f.suppressed_by_context) out << "  [suppressed: " << f.suppression_reason << "]";
    out << "\n";
  }
  for (std::size_t i = 0; i < report.plans.size(); ++i) {
    const auto& p = report.plans[i];
    const Finding& f = p.finding;
    out << "\n[" << i + 1 << "] " << to_string(f.kind) << " at " << f.location.display() << " ("
        << to_string(f.phase) << ", " << to_string(f.confidence) << " confidence)\n";
    out << "    " << f.evidence << "\n";
    if (p.automated()) {
      out << "    fix (rewrite):\n";
      for (const auto& t : p.transformations)
        out << "      -- " << to_string(t.op) << " " << t.target << ": " << t.tree_edit << "\n"
            << indent(t.rendered, "      ") << ";\n";
    } else if (p.textual_fix) {
      out << "    fix: " << *p.textual_fix << "\n";
    }
    for (const auto& n : p.notes) out << "    note: " << n << "\n";
    if (!p.impacted.empty()) {
      out << "    impacted:";
      for (const auto& id : p.impacted) out << " " << id;
      out << "\n";
    }
    if (!p.conflicts_with.empty()) {
      out << "    touches the same table as:";
      for (std::size_t c : p.conflicts_with) out << " [" << c + 1 << "]";
      out << " (apply one, then re-run)\n";
    }
  }
  return out.str();
}

}  // namespace sqlsmell
