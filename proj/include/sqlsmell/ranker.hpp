// ---------------------------------------------------------------------------
// ranker.hpp
//
//   s_rp = s_wp = s_m = min(1, x/5)   s_da = min(1, x/8)   s_di = s_a = x
//   score = sum of w_k * s_k
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/catalog.hpp"
#include "sqlsmell/config.hpp"
#include "sqlsmell/finding.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace sqlsmell {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct MissingMetrics : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Metric { Rp, Wp, M, Da, Di, A };

inline constexpr std::array<Metric, 6> kMetrics = {Metric::Rp, Metric::Wp, Metric::M,
                                                   Metric::Da, Metric::Di, Metric::A};

std::string_view to_string(Metric metric);

// Throws DomainError for negative input or a non-binary di/a value.
double normalize(Metric metric, double x);

struct ScoreBreakdown {
  // Indexed by Metric.
  std::array<double, 6> terms{};
  std::array<double, 6> contributions{};
  double total = 0;
};

ScoreBreakdown score(const ImpactVector& iv, const RankingConfig& cfg);

struct RankedFinding {
  Finding finding;
  ScoreBreakdown score;
};

// Findings are grouped by statement (data findings without a statement are
// grouped per table, after the statements). Within a group: descending
// score. Groups: by finding count or by score sum, per the config. Ties fall
// back to source order, then kind id. Suppressed findings follow all
// unsuppressed ones, ranked the same way among themselves.
std::vector<RankedFinding> rank(const std::vector<Finding>& findings, const RankingConfig& cfg,
                                const MetricsTable& metrics);

}  // namespace sqlsmell
