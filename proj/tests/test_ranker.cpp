#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace sqlsmell;

namespace {

// Reference scorer written out term by term.
double reference_score(const ImpactVector& v, const Weights& w) {
  auto clamp5 = [](double x) { return x / 5 < 1 ? x / 5 : 1.0; };
  auto clamp8 = [](double x) { return x / 8 < 1 ? x / 8 : 1.0; };
  return w.rp * clamp5(v.rp) + w.wp * clamp5(v.wp) + w.m * clamp5(v.m) + w.da * clamp8(v.da) +
         w.di * v.di + w.a * v.a;
}

Finding on_statement(ApKind kind, std::size_t ordinal, std::string id) {
  Finding f;
  f.kind = kind;
  f.location.statement_id = std::move(id);
  f.location.ordinal = ordinal;
  f.location.table = "Tenants";
  return f;
}

std::vector<std::size_t> argsort(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] > v[b]; });
  return idx;
}

}  // namespace

TEST(Normalize, Examples) {
  EXPECT_DOUBLE_EQ(normalize(Metric::Rp, 1.5), 0.3);
  EXPECT_DOUBLE_EQ(normalize(Metric::Da, 0), 0.0);
  EXPECT_DOUBLE_EQ(normalize(Metric::M, 7), 1.0);
  EXPECT_DOUBLE_EQ(normalize(Metric::Da, 4), 0.5);
  EXPECT_DOUBLE_EQ(normalize(Metric::Rp, 636), 1.0);
  EXPECT_DOUBLE_EQ(normalize(Metric::Di, 1), 1.0);
  EXPECT_THROW(normalize(Metric::Rp, -1), DomainError);
  EXPECT_THROW(normalize(Metric::A, 0.5), DomainError);
}

TEST(Score, PaperScores) {
  const auto& m = default_metrics();
  EXPECT_NEAR(score(m.at(ApKind::IndexUnderuse), preset("C1")).total, 0.21, 1e-9);
  EXPECT_NEAR(score(m.at(ApKind::EnumeratedTypes), preset("C1")).total, 0.175, 1e-9);
  EXPECT_NEAR(score(m.at(ApKind::IndexUnderuse), preset("C2")).total, 0.12, 1e-9);
  // The published formula gives 0.445 here.
  EXPECT_NEAR(score(m.at(ApKind::EnumeratedTypes), preset("C2")).total, 0.445, 1e-9);
}

TEST(Score, BreakdownSumsToTotal) {
  auto b = score(ImpactVector{636, 0, 3, 8, 1, 0}, preset("C2"));
  double sum = 0;
  for (double c : b.contributions) sum += c;
  EXPECT_DOUBLE_EQ(sum, b.total);
  EXPECT_DOUBLE_EQ(b.terms[static_cast<int>(Metric::Rp)], 1.0);
  EXPECT_DOUBLE_EQ(b.terms[static_cast<int>(Metric::Da)], 1.0);
}

TEST(Rank, PresetDecidesTopFinding) {
  std::vector<Finding> f = {on_statement(ApKind::EnumeratedTypes, 0, "q:1"),
                            on_statement(ApKind::IndexUnderuse, 0, "q:1")};
  auto c1 = rank(f, preset("C1"), default_metrics());
  ASSERT_EQ(c1.size(), 2u);
  EXPECT_EQ(c1[0].finding.kind, ApKind::IndexUnderuse);
  auto c2 = rank(f, preset("C2"), default_metrics());
  EXPECT_EQ(c2[0].finding.kind, ApKind::EnumeratedTypes);
}

TEST(Rank, GroupsByStatement) {
  // q:2 has two findings summing above q:1's single one.
  std::vector<Finding> f = {on_statement(ApKind::GodTable, 0, "q:1"),
                            on_statement(ApKind::ColumnWildcardUsage, 1, "q:2"),
                            on_statement(ApKind::PatternMatching, 1, "q:2")};
  auto by_score = rank(f, preset("C1"), default_metrics());
  double god = score(default_metrics().at(ApKind::GodTable), preset("C1")).total;
  double q2 = score(default_metrics().at(ApKind::ColumnWildcardUsage), preset("C1")).total +
              score(default_metrics().at(ApKind::PatternMatching), preset("C1")).total;
  EXPECT_EQ(by_score[0].finding.location.statement_id, q2 > god ? "q:2" : "q:1");
  RankingConfig count = preset("C1");
  count.inter_query_mode = InterQueryMode::ByFindingCount;
  auto by_count = rank(f, count, default_metrics());
  EXPECT_EQ(by_count[0].finding.location.statement_id, "q:2");
  EXPECT_EQ(by_count[1].finding.location.statement_id, "q:2");
  EXPECT_GE(by_count[0].score.total, by_count[1].score.total);
}

TEST(Rank, SuppressedLastAndDataAfterStatements) {
  Finding data;
  data.kind = ApKind::MultiValuedAttribute;
  data.phase = Phase::Data;
  data.location.table = "t";
  Finding sup = on_statement(ApKind::MultiValuedAttribute, 0, "q:1");
  sup.suppressed_by_context = true;
  std::vector<Finding> f = {sup, data, on_statement(ApKind::OrderingByRand, 3, "q:4")};
  auto r = rank(f, preset("C1"), default_metrics());
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].finding.kind, ApKind::OrderingByRand);
  EXPECT_EQ(r[1].finding.phase, Phase::Data);
  EXPECT_TRUE(r[2].finding.suppressed_by_context);
}

TEST(Rank, MissingMetricsIsAnError) {
  MetricsTable partial = default_metrics();
  partial.erase(ApKind::GodTable);
  EXPECT_THROW(rank({on_statement(ApKind::GodTable, 0, "q")}, preset("C1"), partial), MissingMetrics);
}

TEST(Properties, RandomVectorsMatchReferenceAndStayBounded) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> raw(0, 20), weight(0, 1), scale(0.01, 100);
  std::bernoulli_distribution bit(0.5);
  for (int round = 0; round < 10; ++round) {
    RankingConfig cfg;
    cfg.weights = {weight(rng), weight(rng), weight(rng), weight(rng), weight(rng), weight(rng)};
    normalize_weights(cfg);
    std::vector<ImpactVector> vs;
    std::vector<double> scores;
    for (int i = 0; i < 100; ++i) {
      ImpactVector v{raw(rng), raw(rng), raw(rng), raw(rng), bit(rng) ? 1.0 : 0.0, bit(rng) ? 1.0 : 0.0};
      double s = score(v, cfg).total;
      EXPECT_NEAR(s, reference_score(v, cfg.weights), 1e-12);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0 + 1e-12);
      vs.push_back(v);
      scores.push_back(s);
    }
    RankingConfig scaled = cfg;
    double c = scale(rng);
    for (double* w : {&scaled.weights.rp, &scaled.weights.wp, &scaled.weights.m, &scaled.weights.da,
                      &scaled.weights.di, &scaled.weights.a})
      *w *= c;
    std::vector<double> scaled_scores;
    for (const auto& v : vs) scaled_scores.push_back(score(v, scaled).total);
    EXPECT_EQ(argsort(scores), argsort(scaled_scores));
  }
}

TEST(Config, PresetsAndFiles) {
  auto c1 = preset("C1");
  EXPECT_DOUBLE_EQ(c1.weights.rp, 0.7);
  EXPECT_DOUBLE_EQ(preset("C2").weights.wp, 0.4);
  EXPECT_THROW(preset("C3"), ConfigError);
  // Published presets are used as is.
  EXPECT_FALSE(normalize_weights(c1).has_value());
  EXPECT_DOUBLE_EQ(c1.weights.rp, 0.7);

  RankingConfig custom = c1;
  apply_weights(custom, parse_key_values("# custom\nw_rp = 2\nw_wp = 2\nw_m=0\nw_da=0\nw_di=0\nw_a=0\n"));
  EXPECT_TRUE(custom.preset.empty());
  EXPECT_TRUE(normalize_weights(custom).has_value());
  EXPECT_DOUBLE_EQ(custom.weights.rp, 0.5);
  EXPECT_THROW(apply_weights(custom, parse_key_values("w_zz = 1")), ConfigError);
  RankingConfig negative;
  negative.weights.rp = -1;
  EXPECT_THROW(normalize_weights(negative), ConfigError);

  auto m = apply_metrics(parse_key_values("GodTable.rp = 7\nGodTable.di = 1"), default_metrics());
  EXPECT_DOUBLE_EQ(m.at(ApKind::GodTable).rp, 7);
  EXPECT_THROW(apply_metrics(parse_key_values("GodTable.di = 0.5"), default_metrics()), ConfigError);
  EXPECT_THROW(apply_metrics(parse_key_values("Nope.rp = 1"), default_metrics()), ConfigError);

  BuildConfig b;
  apply_thresholds(b, parse_key_values("join_threshold = 3\nseed = 5"));
  EXPECT_EQ(b.join_threshold, 3u);
  EXPECT_EQ(b.sampling, Sampling::Seeded);
  EXPECT_THROW(apply_thresholds(b, parse_key_values("mva_fraction = 2")), ConfigError);
}

TEST(Config, ShippedFilesMatchBuiltins) {
  auto kv = read_key_values_file(data_dir() + "/metrics_default.conf");
  EXPECT_EQ(apply_metrics(kv, {}), default_metrics());
  for (const auto& name : preset_names()) {
    RankingConfig cfg;
    apply_weights(cfg, read_key_values_file(data_dir() + "/presets/" + name + ".conf"));
    EXPECT_EQ(cfg.weights, preset(name).weights) << name;
  }
}

TEST(Catalog, TwentySixKinds) {
  std::map<Category, int> per;
  for (const auto& k : all_kinds()) ++per[k.category];
  EXPECT_EQ(per[Category::LogicalDesign], 7);
  EXPECT_EQ(per[Category::PhysicalDesign], 6);
  EXPECT_EQ(per[Category::Query], 7);
  EXPECT_EQ(per[Category::Data], 6);
  EXPECT_EQ(default_metrics().at(ApKind::MultiValuedAttribute).rp, 636);
  for (const auto& k : all_kinds()) {
    EXPECT_EQ(kind_from_string(to_string(k.kind)), k.kind);
    EXPECT_TRUE(default_metrics().count(k.kind));
  }
}
