#include "sqlsmell/ranker.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace sqlsmell {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Rp: return "rp";
    case Metric::Wp: return "wp";
    case Metric::M: return "m";
    case Metric::Da: return "da";
    case Metric::Di: return "di";
    case Metric::A: return "a";
  }
  return "?";
}

double normalize(Metric metric, double x) {
  if (!(x >= 0)) throw DomainError("metric " + std::string(to_string(metric)) + " must be >= 0");
  switch (metric) {
    case Metric::Rp:
    case Metric::Wp:
    case Metric::M:
      return std::min(1.0, x / 5.0);
    case Metric::Da:
      return std::min(1.0, x / 8.0);
    case Metric::Di:
    case Metric::A:
      if (x != 0 && x != 1)
        throw DomainError("metric " + std::string(to_string(metric)) + " must be 0 or 1");
      return x;
  }
  return 0;
}

ScoreBreakdown score(const ImpactVector& iv, const RankingConfig& cfg) {
  const std::array<double, 6> raw = {iv.rp, iv.wp, iv.m, iv.da, iv.di, iv.a};
  const Weights& w = cfg.weights;
  const std::array<double, 6> weights = {w.rp, w.wp, w.m, w.da, w.di, w.a};
  ScoreBreakdown out;
  for (std::size_t i = 0; i < kMetrics.size(); ++i) {
    out.terms[i] = normalize(kMetrics[i], raw[i]);
    out.contributions[i] = weights[i] * out.terms[i];
    out.total += out.contributions[i];
  }
  return out;
}

namespace {

struct GroupKey {
  int tier = 0;  // 0 statement, 1 table
  std::size_t ordinal = 0;
  std::string table;

  bool operator<(const GroupKey& o) const {
    return std::tie(tier, ordinal, table) < std::tie(o.tier, o.ordinal, o.table);
  }
};

GroupKey group_of(const Finding& f) {
  if (f.location.ordinal) return GroupKey{0, *f.location.ordinal, {}};
  return GroupKey{1, 0, canonical(f.location.table)};
}

void rank_slice(std::vector<RankedFinding> items, const RankingConfig& cfg,
                std::vector<RankedFinding>& out) {
  std::map<GroupKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < items.size(); ++i) groups[group_of(items[i].finding)].push_back(i);

  struct Group {
    GroupKey key;
    std::vector<std::size_t> members;
    double sum = 0;
  };
  std::vector<Group> ordered;
  for (auto& [key, members] : groups) {
    Group g{key, members, 0};
    for (auto i : members) g.sum += items[i].score.total;
    std::stable_sort(g.members.begin(), g.members.end(), [&](std::size_t a, std::size_t b) {
      if (items[a].score.total != items[b].score.total)
        return items[a].score.total > items[b].score.total;
      return kind_id(items[a].finding.kind) < kind_id(items[b].finding.kind);
    });
    ordered.push_back(std::move(g));
  }
  std::stable_sort(ordered.begin(), ordered.end(), [&](const Group& a, const Group& b) {
    if (a.key.tier != b.key.tier) return a.key.tier < b.key.tier;
    if (cfg.inter_query_mode == InterQueryMode::ByFindingCount) {
      if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    } else if (a.sum != b.sum) {
      return a.sum > b.sum;
    }
    return a.key < b.key;
  });
  for (const auto& g : ordered)
    for (auto i : g.members) out.push_back(std::move(items[i]));
}

}  // namespace

std::vector<RankedFinding> rank(const std::vector<Finding>& findings, const RankingConfig& cfg,
                                const MetricsTable& metrics) {
  std::vector<RankedFinding> active, suppressed;
  for (const auto& f : findings) {
    auto it = metrics.find(f.kind);
    if (it == metrics.end())
      throw MissingMetrics("no impact metrics for " + std::string(to_string(f.kind)));
    RankedFinding r{f, score(it->second, cfg)};
    (f.suppressed_by_context ? suppressed : active).push_back(std::move(r));
  }
  std::vector<RankedFinding> out;
  rank_slice(std::move(active), cfg, out);
  rank_slice(std::move(suppressed), cfg, out);
  return out;
}

}  // namespace sqlsmell
