// ---------------------------------------------------------------------------
// catalog.hpp
//
// The 26 anti-pattern kinds, their categories, impact flags and the default
// impact metrics table.
// ---------------------------------------------------------------------------
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace sqlsmell {

enum class Category { LogicalDesign, PhysicalDesign, Query, Data };

// Declaration order is the registry order and the kind id used for tie breaks.
enum class ApKind {
  MultiValuedAttribute,
  NoPrimaryKey,
  NoForeignKey,
  GenericPrimaryKey,
  DataInMetadata,
  AdjacencyList,
  GodTable,
  RoundingErrors,
  EnumeratedTypes,
  ExternalDataStorage,
  IndexOveruse,
  IndexUnderuse,
  CloneTable,
  ColumnWildcardUsage,
  ConcatenateNulls,
  OrderingByRand,
  PatternMatching,
  ImplicitColumns,
  DistinctAndJoin,
  TooManyJoins,
  MissingTimezone,
  IncorrectDataType,
  DenormalizedTable,
  InformationDuplication,
  RedundantColumn,
  NoDomainConstraint,
};

inline constexpr std::size_t kKindCount = 26;

enum class DaDirection { None, Up, Down };

struct ImpactFlags {
  bool performance = false;  // P
  bool maintainability = false;
  bool amplification = false;
  bool integrity = false;
  bool accuracy = false;
  DaDirection da_direction = DaDirection::None;
};

struct KindInfo {
  ApKind kind;
  std::string_view name;
  Category category;
  ImpactFlags flags;
};

const std::array<KindInfo, kKindCount>& all_kinds();
const KindInfo& info(ApKind kind);
std::size_t kind_id(ApKind kind);

std::string_view to_string(ApKind kind);
std::string_view to_string(Category category);
std::string_view to_string(DaDirection direction);
std::optional<ApKind> kind_from_string(std::string_view name);
std::optional<Category> category_from_string(std::string_view name);

// Raw metrics: read/write speedup, refactoring change count, data
// amplification, integrity flag, accuracy flag.
struct ImpactVector {
  double rp = 0;
  double wp = 0;
  double m = 0;
  double da = 0;
  double di = 0;
  double a = 0;

  bool operator==(const ImpactVector&) const = default;
};

using MetricsTable = std::map<ApKind, ImpactVector>;

// Built-in table; the same values ship as data/metrics_default.conf.
const MetricsTable& default_metrics();

}  // namespace sqlsmell
