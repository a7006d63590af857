#include "sqlsmell/config.hpp"

#include "sqlsmell/frontend.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sqlsmell {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  double d = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(d))
    throw ConfigError("bad number for " + key + ": '" + value + "'");
  return d;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  double d = to_double(key, value);
  if (d < 0 || d != std::floor(d)) throw ConfigError("bad count for " + key + ": '" + value + "'");
  return static_cast<std::size_t>(d);
}

double to_fraction(const std::string& key, const std::string& value) {
  double d = to_double(key, value);
  if (d < 0 || d > 1) throw ConfigError(key + " must be within [0,1]");
  return d;
}

}  // namespace

std::string_view to_string(InterQueryMode mode) {
  return mode == InterQueryMode::ByFindingCount ? "count" : "score";
}

RankingConfig preset(std::string_view name) {
  RankingConfig cfg;
  if (iequals(name, "C1")) {
    cfg.weights = Weights{0.7, 0.15, 0.05, 0.04, 0.02, 0.02};
    cfg.preset = "C1";
  } else if (iequals(name, "C2")) {
    cfg.weights = Weights{0.4, 0.4, 0.1, 0.04, 0.02, 0.02};
    cfg.preset = "C2";
  } else {
    throw ConfigError("unknown preset: " + std::string(name));
  }
  return cfg;
}

std::vector<std::string> preset_names() { return {"C1", "C2"}; }

KeyValues parse_key_values(std::string_view text, std::string_view origin) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty())
      throw ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, value);
  }
  return out;
}

KeyValues read_key_values_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str(), path);
}

void apply_thresholds(BuildConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "god_table_threshold") cfg.god_table_threshold = to_count(key, value);
    else if (key == "join_threshold") cfg.join_threshold = to_count(key, value);
    else if (key == "index_use_min") cfg.index_use_min = to_count(key, value);
    else if (key == "mva_fraction") cfg.mva_fraction = to_fraction(key, value);
    else if (key == "enum_distinct_max") cfg.enum_distinct_max = to_count(key, value);
    else if (key == "enum_min_rows") cfg.enum_min_rows = to_count(key, value);
    else if (key == "sample_size") cfg.sample_size = to_count(key, value);
    else if (key == "incorrect_type_share") cfg.incorrect_type_share = to_fraction(key, value);
    else if (key == "denormalized_dup_ratio") cfg.denormalized_dup_ratio = to_fraction(key, value);
    else if (key == "seed") {
      cfg.seed = to_count(key, value);
      cfg.sampling = Sampling::Seeded;
    } else if (key == "sampling") {
      if (value == "first") cfg.sampling = Sampling::FirstN;
      else if (value == "seeded") cfg.sampling = Sampling::Seeded;
      else throw ConfigError("sampling must be first or seeded");
    } else {
      throw ConfigError("unknown threshold key: " + key);
    }
  }
  if (cfg.sample_size == 0) throw ConfigError("sample_size must be positive");
}

void apply_weights(RankingConfig& cfg, const KeyValues& kv) {
  bool touched = false;
  for (const auto& [key, value] : kv) {
    if (key == "preset") {
      auto mode = cfg.inter_query_mode;
      cfg = preset(value);
      cfg.inter_query_mode = mode;
      continue;
    }
    if (key == "inter_query_mode") {
      if (value == "count") cfg.inter_query_mode = InterQueryMode::ByFindingCount;
      else if (value == "score") cfg.inter_query_mode = InterQueryMode::ByScore;
      else throw ConfigError("inter_query_mode must be count or score");
      continue;
    }
    double* slot = nullptr;
    if (key == "w_rp") slot = &cfg.weights.rp;
    else if (key == "w_wp") slot = &cfg.weights.wp;
    else if (key == "w_m") slot = &cfg.weights.m;
    else if (key == "w_da") slot = &cfg.weights.da;
    else if (key == "w_di") slot = &cfg.weights.di;
    else if (key == "w_a") slot = &cfg.weights.a;
    if (!slot) throw ConfigError("unknown weight key: " + key);
    *slot = to_double(key, value);
    touched = true;
  }
  if (touched) cfg.preset.clear();
}

MetricsTable apply_metrics(const KeyValues& kv, MetricsTable base) {
  for (const auto& [key, value] : kv) {
    std::size_t dot = key.rfind('.');
    if (dot == std::string::npos) throw ConfigError("metrics key must be <Kind>.<metric>: " + key);
    auto kind = kind_from_string(key.substr(0, dot));
    if (!kind) throw ConfigError("unknown anti-pattern kind: " + key.substr(0, dot));
    std::string metric = key.substr(dot + 1);
    double v = to_double(key, value);
    if (v < 0) throw ConfigError(key + " must be nonnegative");
    ImpactVector& iv = base[*kind];
    if (metric == "rp") iv.rp = v;
    else if (metric == "wp") iv.wp = v;
    else if (metric == "m") iv.m = v;
    else if (metric == "da") iv.da = v;
    else if (metric == "di" || metric == "a") {
      if (v != 0 && v != 1) throw ConfigError(key + " must be 0 or 1");
      (metric == "di" ? iv.di : iv.a) = v;
    } else {
      throw ConfigError("unknown metric: " + metric);
    }
  }
  return base;
}

std::optional<std::string> normalize_weights(RankingConfig& cfg) {
  Weights& w = cfg.weights;
  for (double x : {w.rp, w.wp, w.m, w.da, w.di, w.a})
    if (x < 0 || !std::isfinite(x)) throw ConfigError("weights must be nonnegative");
  double sum = w.sum();
  if (sum <= 0) throw ConfigError("weights must not all be zero");
  // Published presets sum to 0.98 and are scored as published.
  if (!cfg.preset.empty() || std::fabs(sum - 1.0) <= 1e-9) return std::nullopt;
  for (double* x : {&w.rp, &w.wp, &w.m, &w.da, &w.di, &w.a}) *x /= sum;
  std::ostringstream msg;
  msg << "weights summed to " << sum << "; rescaled to 1";
  return msg.str();
}

std::string data_dir() {
  if (const char* env = std::getenv("SQLSMELL_DATA_DIR")) return env;
#ifdef SQLSMELL_DATA_DIR
  return SQLSMELL_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace sqlsmell
