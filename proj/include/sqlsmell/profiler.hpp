// ---------------------------------------------------------------------------
// profiler.hpp
//
// Table sampling, column statistics and the data-phase rules.
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/context.hpp"

#include <map>
#include <string>
#include <vector>

namespace sqlsmell {

// First-N or seeded reservoir sample of up to config.sample_size rows.
SampledTable sample_table(DatasetAdapter& adapter, const std::string& table,
                          const BuildConfig& config);

// Profiles every column of a sample. `declared_types` may be shorter than the
// column list.
std::vector<ColumnProfile> profile_sample(const SampledTable& sample);

// Keyed by column name.
std::map<std::string, ColumnProfile> profile_table(DatasetAdapter& adapter,
                                                   const std::string& table,
                                                   const BuildConfig& config);

ValueClass classify_value(std::string_view value);
// ',', ';' or '|' separated list of >= 2 short whitespace-free tokens.
bool is_delimited_list(std::string_view value);
bool has_timezone_suffix(std::string_view value);

// Data-category findings plus the data confirmation signals for
// MultiValuedAttribute and EnumeratedTypes.
std::vector<Finding> data_rules(const ApplicationContext& ctx);

}  // namespace sqlsmell
