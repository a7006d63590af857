#include "sqlsmell/profiler.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <regex>
#include <set>

namespace sqlsmell {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

const std::regex& integer_re() {
  static const std::regex re(R"([+-]?\d+)");
  return re;
}
const std::regex& decimal_re() {
  static const std::regex re(R"([+-]?(\d+\.\d*|\.\d+|\d+(\.\d*)?[eE][+-]?\d+))");
  return re;
}
const std::regex& datetime_re() {
  static const std::regex re(
      R"(\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?)?\s*(Z|[+-]\d{2}(:?\d{2})?)?)");
  return re;
}

}  // namespace

ValueClass classify_value(std::string_view raw) {
  std::string_view v = trim(raw);
  if (v.empty()) return ValueClass::Text;
  if (iequals(v, "true") || iequals(v, "false")) return ValueClass::Boolean;
  std::string s(v);
  if (std::regex_match(s, integer_re())) return ValueClass::Integer;
  if (std::regex_match(s, decimal_re())) return ValueClass::Decimal;
  if (std::regex_match(s, datetime_re())) return ValueClass::DateTime;
  return ValueClass::Text;
}

bool has_timezone_suffix(std::string_view raw) {
  static const std::regex re(R"(.*\d{2}:\d{2}(:\d{2}(\.\d+)?)?\s*(Z|[+-]\d{2}(:?\d{2})?))");
  std::string s(trim(raw));
  return std::regex_match(s, re);
}

bool is_delimited_list(std::string_view value) {
  for (char delim : {',', ';', '|'}) {
    if (value.find(delim) == std::string_view::npos) continue;
    std::size_t tokens = 0;
    bool ok = true;
    std::size_t start = 0;
    while (start <= value.size()) {
      std::size_t end = value.find(delim, start);
      if (end == std::string_view::npos) end = value.size();
      std::string_view tok = trim(value.substr(start, end - start));
      if (!tok.empty()) {
        ++tokens;
        if (tok.size() > 32 ||
            std::any_of(tok.begin(), tok.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
          ok = false;
      }
      start = end + 1;
    }
    if (ok && tokens >= 2) return true;
  }
  return false;
}

SampledTable sample_table(DatasetAdapter& adapter, const std::string& table,
                          const BuildConfig& config) {
  SampledTable out;
  out.name = table;
  out.columns = adapter.columns(table);
  out.declared_types = adapter.declared_types(table);
  out.declared_types.resize(out.columns.size());
  const std::size_t cap = config.sample_size;

  if (config.sampling == Sampling::FirstN) {
    adapter.scan(table, [&](const Row& row) {
      if (out.rows.size() < cap) out.rows.push_back(row);
      ++out.total_rows;
      return true;
    });
  } else {
    // Reservoir sample, then restored to storage order.
    std::mt19937_64 rng(config.seed);
    std::vector<std::pair<std::size_t, Row>> reservoir;
    adapter.scan(table, [&](const Row& row) {
      std::size_t i = out.total_rows++;
      if (reservoir.size() < cap) {
        reservoir.emplace_back(i, row);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::size_t j = pick(rng);
        if (j < cap) reservoir[j] = {i, row};
      }
      return true;
    });
    std::sort(reservoir.begin(), reservoir.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [i, row] : reservoir) out.rows.push_back(std::move(row));
  }
  for (auto& row : out.rows) row.resize(out.columns.size());
  return out;
}

std::vector<ColumnProfile> profile_sample(const SampledTable& sample) {
  std::vector<ColumnProfile> out;
  for (std::size_t c = 0; c < sample.columns.size(); ++c) {
    ColumnProfile p;
    p.table = sample.name;
    p.column = sample.columns[c];
    p.declared_type = c < sample.declared_types.size() ? sample.declared_types[c] : "";
    p.row_count_sampled = sample.rows.size();

    std::map<std::string, std::size_t> counts;
    std::map<ValueClass, std::size_t> classes;
    std::size_t nulls = 0;
    std::size_t delimited = 0;
    std::size_t tz = 0;
    std::size_t timed = 0;
    for (const auto& row : sample.rows) {
      const Cell& cell = row[c];
      p.sample.push_back(cell);
      if (!cell) {
        ++nulls;
        continue;
      }
      ++counts[*cell];
      ValueClass vc = classify_value(*cell);
      ++classes[vc];
      if (is_delimited_list(*cell)) ++delimited;
      if (vc == ValueClass::DateTime && cell->find(':') != std::string::npos) {
        ++timed;
        if (has_timezone_suffix(*cell)) ++tz;
      }
    }
    const std::size_t non_null = p.row_count_sampled - nulls;
    p.distinct_count = counts.size();
    p.null_fraction = p.row_count_sampled ? static_cast<double>(nulls) / p.row_count_sampled : 0.0;
    if (non_null) {
      std::size_t modal = 0;
      for (const auto& [v, n] : counts) modal = std::max(modal, n);
      p.constant_fraction = static_cast<double>(modal) / non_null;
      p.delimiter_list_fraction = static_cast<double>(delimited) / non_null;
      p.inferred_value_class = ValueClass::Mixed;
      for (const auto& [vc, n] : classes)
        if (n >= 0.95 * non_null) p.inferred_value_class = vc;
      // Integers mixed into a decimal column still make it Decimal.
      if (p.inferred_value_class == ValueClass::Mixed &&
          classes[ValueClass::Integer] + classes[ValueClass::Decimal] >= 0.95 * non_null)
        p.inferred_value_class = ValueClass::Decimal;
    }
    std::string upper_type = p.declared_type;
    std::transform(upper_type.begin(), upper_type.end(), upper_type.begin(), ::toupper);
    bool declared_tz = upper_type.find("WITH TIME ZONE") != std::string::npos ||
                       upper_type.find("TIMESTAMPTZ") != std::string::npos;
    p.timezone_annotated = declared_tz || (timed > 0 && tz == timed);
    out.push_back(std::move(p));
  }
  return out;
}

std::map<std::string, ColumnProfile> profile_table(DatasetAdapter& adapter,
                                                   const std::string& table,
                                                   const BuildConfig& config) {
  std::map<std::string, ColumnProfile> out;
  for (auto& p : profile_sample(sample_table(adapter, table, config))) out[p.column] = std::move(p);
  return out;
}

}  // namespace sqlsmell
