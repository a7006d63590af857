// Data-phase rules over sampled tables.
#include "sqlsmell/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

namespace sqlsmell {

namespace {

bool is_key(const TableSchema* t, std::string_view column) {
  if (!t) return false;
  for (const auto& c : t->constraints) {
    if (c.kind == ConstraintKind::NotNull || c.kind == ConstraintKind::Check) continue;
    for (const auto& x : c.columns)
      if (iequals(x, column)) return true;
  }
  return false;
}

bool textual(const ColumnProfile& p) {
  return textual_type(p.declared_type) ||
         (p.declared_type.empty() && p.inferred_value_class == ValueClass::Text);
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(4);
  out << x;
  return out.str();
}

Finding data_finding(ApKind kind, const ApplicationContext& ctx, const std::string& table,
                     const std::string& column, std::string evidence) {
  Finding f;
  f.kind = kind;
  f.phase = Phase::Data;
  f.location.table = table;
  f.location.column = column;
  f.evidence = std::move(evidence);
  f.context_snapshot = ctx.snapshot;
  return f;
}

std::optional<double> number(const Cell& c) {
  if (!c) return std::nullopt;
  ValueClass vc = classify_value(*c);
  if (vc != ValueClass::Integer && vc != ValueClass::Decimal) return std::nullopt;
  return std::stod(*c);
}

std::optional<long> year_of(const Cell& c) {
  if (!c || classify_value(*c) != ValueClass::DateTime) return std::nullopt;
  return std::stol(c->substr(0, 4));
}

std::optional<long> integer(const Cell& c) {
  if (!c || classify_value(*c) != ValueClass::Integer) return std::nullopt;
  try {
    return std::stol(*c);
  } catch (...) {
    return std::nullopt;
  }
}

// Derived-column checks over every row where the inputs are non-null.
struct Derivation {
  std::string description;
};

std::optional<Derivation> derived_from(const SampledTable& s, std::size_t y, std::size_t x) {
  std::size_t rows = 0;
  bool year_ok = true, length_ok = true, age_ok = true;
  std::optional<long> age_base;
  std::set<std::string> ys;
  for (const auto& row : s.rows) {
    if (!row[x] || !row[y]) continue;
    ++rows;
    ys.insert(*row[y]);
    auto yi = integer(row[y]);
    auto yr = year_of(row[x]);
    if (!yi || !yr) {
      year_ok = age_ok = false;
    } else {
      year_ok = year_ok && *yi == *yr;
      long base = *yi + *yr;
      if (!age_base) age_base = base;
      age_ok = age_ok && base == *age_base;
    }
    length_ok = length_ok && yi && *yi == static_cast<long>(row[x]->size());
  }
  if (rows < 3 || ys.size() < 2) return std::nullopt;
  const std::string& xn = s.columns[x];
  if (year_ok) return Derivation{"year(" + xn + ")"};
  if (age_ok && age_base && *age_base >= 1900 && *age_base <= 2200)
    return Derivation{std::to_string(*age_base) + " - year(" + xn + ")"};
  if (length_ok) return Derivation{"length(" + xn + ")"};
  return std::nullopt;
}

std::optional<Derivation> concat_of(const SampledTable& s, std::size_t z, std::size_t a,
                                    std::size_t b) {
  static const char* seps[] = {"", " ", ",", ", ", "-", "_", "/", "."};
  for (const char* sep : seps) {
    std::size_t rows = 0;
    bool ok = true, a_nonempty = false, b_nonempty = false;
    for (const auto& row : s.rows) {
      if (!row[z] || !row[a] || !row[b]) continue;
      ++rows;
      a_nonempty = a_nonempty || !row[a]->empty();
      b_nonempty = b_nonempty || !row[b]->empty();
      if (*row[z] != *row[a] + sep + *row[b]) {
        ok = false;
        break;
      }
    }
    if (ok && rows >= 3 && a_nonempty && b_nonempty)
      return Derivation{"concat(" + s.columns[a] + ", '" + sep + "', " + s.columns[b] + ")"};
  }
  return std::nullopt;
}

// Values of a and b determine each other over the sample.
bool bijective(const SampledTable& s, std::size_t a, std::size_t b) {
  std::map<std::string, std::string> ab, ba;
  std::size_t rows = 0;
  for (const auto& row : s.rows) {
    if (!row[a] || !row[b]) continue;
    ++rows;
    auto [i, fresh_a] = ab.emplace(*row[a], *row[b]);
    if (!fresh_a && i->second != *row[b]) return false;
    auto [j, fresh_b] = ba.emplace(*row[b], *row[a]);
    if (!fresh_b && j->second != *row[a]) return false;
  }
  return rows >= 2;
}

std::string quote_value(const ColumnProfile* p) {
  for (const auto& c : p->sample)
    if (c) return "'" + *c + "'";
  return "NULL";
}

bool leading_zero_codes(const ColumnProfile& p) {
  return std::any_of(p.sample.begin(), p.sample.end(), [](const Cell& c) {
    return c && c->size() > 1 && (*c)[0] == '0' && std::isdigit(static_cast<unsigned char>((*c)[1]));
  });
}

const std::regex& bounded_name() {
  static const std::regex re("(^|_)(rating|ratings|percent|percentage|pct|score|age|stars?)(_|$)",
                             std::regex::icase);
  return re;
}

}  // namespace

std::vector<Finding> data_rules(const ApplicationContext& ctx) {
  std::vector<Finding> out;
  const BuildConfig& cfg = ctx.config;

  for (const auto& [key, s] : ctx.samples) {
    const TableSchema* schema = ctx.table(s.name);
    std::vector<const ColumnProfile*> profiles;
    for (const auto& c : s.columns) profiles.push_back(ctx.profile(s.name, c));
    auto non_null = [](const ColumnProfile& p) {
      return p.row_count_sampled - static_cast<std::size_t>(std::llround(p.null_fraction * p.row_count_sampled));
    };
    std::vector<Finding> mva, enums, tz, types, denorm, dup, redundant, domain;

    for (std::size_t i = 0; i < s.columns.size(); ++i) {
      const ColumnProfile* p = profiles[i];
      if (!p) continue;
      const std::string& col = s.columns[i];
      std::size_t nn = non_null(*p);

      if (textual(*p) && nn > 0 && p->delimiter_list_fraction >= cfg.mva_fraction) {
        Finding f = data_finding(ApKind::MultiValuedAttribute, ctx, s.name, col,
                                 fmt(p->delimiter_list_fraction * 100) +
                                     "% of sampled values are delimiter-separated lists");
        f.confidence = Confidence::High;
        mva.push_back(std::move(f));
      }

      if (textual(*p) && !is_key(schema, col) && p->row_count_sampled >= cfg.enum_min_rows &&
          p->distinct_count >= 2 && p->distinct_count <= cfg.enum_distinct_max &&
          p->delimiter_list_fraction < cfg.mva_fraction) {
        std::set<std::string> values;
        for (const auto& c : p->sample)
          if (c) values.insert(*c);
        std::string list;
        for (const auto& v : values) list += (list.empty() ? "" : ", ") + v;
        enums.push_back(data_finding(ApKind::EnumeratedTypes, ctx, s.name, col,
                                     std::to_string(p->distinct_count) + " distinct values over " +
                                         std::to_string(p->row_count_sampled) +
                                         " sampled rows: " + list));
      }

      bool timed = std::any_of(p->sample.begin(), p->sample.end(), [](const Cell& c) {
        return c && classify_value(*c) == ValueClass::DateTime && c->find(':') != std::string::npos;
      });
      if (p->inferred_value_class == ValueClass::DateTime && timed && !p->timezone_annotated)
        tz.push_back(data_finding(ApKind::MissingTimezone, ctx, s.name, col,
                                  "timestamps carry no UTC offset and the type (" +
                                      (p->declared_type.empty() ? std::string("undeclared") : p->declared_type) +
                                      ") has no time zone"));

      if (textual_type(p->declared_type) && nn >= 2 && !leading_zero_codes(*p)) {
        std::size_t numeric = 0;
        for (const auto& c : p->sample)
          if (c) {
            ValueClass vc = classify_value(*c);
            numeric += vc == ValueClass::Integer || vc == ValueClass::Decimal;
          }
        double share = static_cast<double>(numeric) / nn;
        if (share >= cfg.incorrect_type_share)
          types.push_back(data_finding(ApKind::IncorrectDataType, ctx, s.name, col,
                                       "declared " + p->declared_type + " but " + fmt(share * 100) +
                                           "% of sampled values are numeric"));
      }

      if (p->row_count_sampled >= 2 &&
          (p->null_fraction == 1.0 || (p->null_fraction == 0.0 && p->constant_fraction == 1.0))) {
        std::string why = p->null_fraction == 1.0 ? "every sampled value is NULL"
                                                  : "every sampled value is " + quote_value(p);
        redundant.push_back(data_finding(ApKind::RedundantColumn, ctx, s.name, col, why));
      }

      if (numeric_type(p->declared_type) && !is_key(schema, col) &&
          !(schema && schema->has_check_on(col)) &&
          (p->inferred_value_class == ValueClass::Integer ||
           p->inferred_value_class == ValueClass::Decimal) &&
          p->distinct_count >= 3) {
        double lo = 1e300, hi = -1e300;
        bool all_numeric = true;
        for (const auto& c : p->sample) {
          if (!c) continue;
          auto v = number(c);
          if (!v) {
            all_numeric = false;
            break;
          }
          lo = std::min(lo, *v);
          hi = std::max(hi, *v);
        }
        std::optional<int> bound;
        if (all_numeric && lo >= 0) {
          if (hi <= 1 && p->inferred_value_class == ValueClass::Decimal) bound = 1;
          else if (hi <= 5) bound = 5;
          else if (hi <= 10) bound = 10;
          else if (hi <= 100) bound = 100;
        }
        if (bound)
          domain.push_back(data_finding(ApKind::NoDomainConstraint, ctx, s.name, col,
                                        "sampled values lie in [" + fmt(lo) + ", " + fmt(hi) +
                                            "], a conventional [0, " + std::to_string(*bound) +
                                            "] scale, but no CHECK constraint bounds the column"));
      }
    }

    // Pairwise: denormalization and derived columns.
    const std::size_t n = s.columns.size();
    auto dup_ratio = [&](std::size_t i) {
      const ColumnProfile* p = profiles[i];
      std::size_t nn = non_null(*p);
      return nn ? 1.0 - static_cast<double>(p->distinct_count) / nn : 0.0;
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (!profiles[i] || is_key(schema, s.columns[i])) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!profiles[j] || is_key(schema, s.columns[j])) continue;
        if (profiles[i]->distinct_count < 2 || profiles[j]->distinct_count < 2) continue;
        if (dup_ratio(i) < cfg.denormalized_dup_ratio || dup_ratio(j) < cfg.denormalized_dup_ratio)
          continue;
        if (!bijective(s, i, j)) continue;
        Finding f = data_finding(ApKind::DenormalizedTable, ctx, s.name, s.columns[i],
                                 s.columns[i] + " and " + s.columns[j] +
                                     " determine each other and repeat across rows (duplication " +
                                     fmt(dup_ratio(i)) + "); they describe a separate entity");
        f.location.related = ColumnRef{s.name, s.columns[j]};
        denorm.push_back(std::move(f));
      }
    }
    if (n <= 40) {
      for (std::size_t y = 0; y < n; ++y) {
        std::optional<Derivation> d;
        std::size_t from = y;
        for (std::size_t x = 0; x < n && !d; ++x)
          if (x != y && (d = derived_from(s, y, x))) from = x;
        for (std::size_t a = 0; a < n && !d; ++a)
          for (std::size_t b = 0; b < n && !d; ++b)
            if (a != b && a != y && b != y && (d = concat_of(s, y, a, b))) from = a;
        if (!d) continue;
        Finding f = data_finding(ApKind::InformationDuplication, ctx, s.name, s.columns[y],
                                 s.columns[y] + " = " + d->description + " on every sampled row");
        f.location.related = ColumnRef{s.name, s.columns[from]};
        dup.push_back(std::move(f));
      }
    }

    for (auto* group : {&mva, &enums, &tz, &types, &denorm, &dup, &redundant, &domain})
      std::move(group->begin(), group->end(), std::back_inserter(out));
  }

  // Name-based fallback for columns no profile covers.
  for (const auto& [key, t] : ctx.schemas) {
    for (const auto& c : t.columns) {
      if (ctx.profile(t.name, c.name)) continue;
      if (!numeric_type(c.declared_type) || is_key(&t, c.name) || t.has_check_on(c.name)) continue;
      if (!std::regex_search(unquote(c.name), bounded_name())) continue;
      Finding f = data_finding(ApKind::NoDomainConstraint, ctx, t.name, c.name,
                               "column name suggests a bounded quantity but no CHECK constraint "
                               "limits it (heuristic: name match, no data profile)");
      f.confidence = Confidence::Low;
      if (!t.source_ids.empty()) f.location.statement_id = t.source_ids.front();
      f.location.ordinal = t.first_ordinal;
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace sqlsmell
