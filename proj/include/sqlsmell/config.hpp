// ---------------------------------------------------------------------------
// config.hpp
//
// Build thresholds, ranking weights/presets and the plain-text key/value
// files they load from.
//
//   # comment
//   key = value
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/catalog.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqlsmell {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Sampling { FirstN, Seeded };

struct BuildConfig {
  std::size_t god_table_threshold = 10;
  std::size_t join_threshold = 5;
  std::size_t index_use_min = 2;
  double mva_fraction = 0.5;
  std::size_t enum_distinct_max = 8;
  std::size_t enum_min_rows = 50;
  std::size_t sample_size = 1000;
  Sampling sampling = Sampling::FirstN;
  std::uint64_t seed = 0;
  double incorrect_type_share = 0.95;
  double denormalized_dup_ratio = 0.5;

  bool operator==(const BuildConfig&) const = default;
};

enum class InterQueryMode { ByFindingCount, ByScore };

std::string_view to_string(InterQueryMode mode);

struct Weights {
  double rp = 0;
  double wp = 0;
  double m = 0;
  double da = 0;
  double di = 0;
  double a = 0;

  double sum() const { return rp + wp + m + da + di + a; }
  bool operator==(const Weights&) const = default;
};

struct RankingConfig {
  Weights weights;
  InterQueryMode inter_query_mode = InterQueryMode::ByScore;
  // Name of the preset the weights came from, empty for custom weights.
  std::string preset;
};

// C1 (read-heavy) and C2 (balanced read/write). Throws ConfigError for any
// other name.
RankingConfig preset(std::string_view name);
std::vector<std::string> preset_names();

using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::string_view text, std::string_view origin = "config");
KeyValues read_key_values_file(const std::string& path);

// Unknown keys and unparsable values raise ConfigError.
void apply_thresholds(BuildConfig& cfg, const KeyValues& kv);
void apply_weights(RankingConfig& cfg, const KeyValues& kv);
// Entries are "<Kind>.<metric> = value" and override `base`.
MetricsTable apply_metrics(const KeyValues& kv, MetricsTable base);

// Rescales custom weights to sum to 1 when they are off by more than 1e-9.
// Named presets are left as published.
// Returns a warning describing the rescale, if one happened. Throws
// ConfigError on negative weights or an all-zero vector.
std::optional<std::string> normalize_weights(RankingConfig& cfg);

// Directory holding the shipped config files (metrics table, presets).
std::string data_dir();

}  // namespace sqlsmell
