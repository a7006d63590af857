#include "sqlsmell/catalog.hpp"

#include "sqlsmell/frontend.hpp"

#include <stdexcept>

namespace sqlsmell {

namespace {

using C = Category;
using D = DaDirection;

constexpr ImpactFlags F(bool p, bool m, D da, bool di, bool a) {
  return ImpactFlags{p, m, da != D::None, di, a, da};
}

// clang-format off
constexpr std::array<KindInfo, kKindCount> kKinds = {{
  {ApKind::MultiValuedAttribute,   "MultiValuedAttribute",   C::LogicalDesign,  F(true,  true,  D::Down, true,  true)},
  {ApKind::NoPrimaryKey,           "NoPrimaryKey",           C::LogicalDesign,  F(true,  true,  D::Up,   true,  false)},
  {ApKind::NoForeignKey,           "NoForeignKey",           C::LogicalDesign,  F(true,  true,  D::None, true,  false)},
  {ApKind::GenericPrimaryKey,      "GenericPrimaryKey",      C::LogicalDesign,  F(false, true,  D::None, false, false)},
  {ApKind::DataInMetadata,         "DataInMetadata",         C::LogicalDesign,  F(true,  true,  D::Down, true,  true)},
  {ApKind::AdjacencyList,          "AdjacencyList",          C::LogicalDesign,  F(true,  false, D::None, false, false)},
  {ApKind::GodTable,               "GodTable",               C::LogicalDesign,  F(true,  true,  D::None, false, false)},
  {ApKind::RoundingErrors,         "RoundingErrors",         C::PhysicalDesign, F(false, false, D::None, false, true)},
  {ApKind::EnumeratedTypes,        "EnumeratedTypes",        C::PhysicalDesign, F(true,  true,  D::Down, false, false)},
  {ApKind::ExternalDataStorage,    "ExternalDataStorage",    C::PhysicalDesign, F(false, true,  D::None, true,  true)},
  {ApKind::IndexOveruse,           "IndexOveruse",           C::PhysicalDesign, F(true,  true,  D::Down, false, false)},
  {ApKind::IndexUnderuse,          "IndexUnderuse",          C::PhysicalDesign, F(true,  true,  D::Up,   false, false)},
  {ApKind::CloneTable,             "CloneTable",             C::PhysicalDesign, F(true,  true,  D::None, true,  true)},
  {ApKind::ColumnWildcardUsage,    "ColumnWildcardUsage",    C::Query,          F(true,  false, D::None, false, true)},
  {ApKind::ConcatenateNulls,       "ConcatenateNulls",       C::Query,          F(false, false, D::None, false, true)},
  {ApKind::OrderingByRand,         "OrderingByRand",         C::Query,          F(true,  false, D::None, false, false)},
  {ApKind::PatternMatching,        "PatternMatching",        C::Query,          F(true,  false, D::None, false, false)},
  {ApKind::ImplicitColumns,        "ImplicitColumns",        C::Query,          F(false, true,  D::None, true,  false)},
  {ApKind::DistinctAndJoin,        "DistinctAndJoin",        C::Query,          F(true,  true,  D::None, false, false)},
  {ApKind::TooManyJoins,           "TooManyJoins",           C::Query,          F(true,  false, D::None, false, false)},
  {ApKind::MissingTimezone,        "MissingTimezone",        C::Data,           F(false, false, D::None, false, true)},
  {ApKind::IncorrectDataType,      "IncorrectDataType",      C::Data,           F(true,  false, D::Down, false, false)},
  {ApKind::DenormalizedTable,      "DenormalizedTable",      C::Data,           F(true,  false, D::Down, false, false)},
  {ApKind::InformationDuplication, "InformationDuplication", C::Data,           F(false, true,  D::None, true,  true)},
  {ApKind::RedundantColumn,        "RedundantColumn",        C::Data,           F(false, false, D::Down, false, false)},
  {ApKind::NoDomainConstraint,     "NoDomainConstraint",     C::Data,           F(false, true,  D::Down, true,  false)},
}};
// clang-format on

ImpactVector from_flags(const ImpactFlags& f) {
  ImpactVector v;
  v.rp = f.performance ? 2 : 0;
  v.wp = f.performance ? 2 : 0;
  v.m = f.maintainability ? 2 : 0;
  v.da = f.amplification ? 1 : 0;
  v.di = f.integrity ? 1 : 0;
  v.a = f.accuracy ? 1 : 0;
  return v;
}

}  // namespace

const std::array<KindInfo, kKindCount>& all_kinds() { return kKinds; }

std::size_t kind_id(ApKind kind) { return static_cast<std::size_t>(kind); }

const KindInfo& info(ApKind kind) { return kKinds.at(kind_id(kind)); }

std::string_view to_string(ApKind kind) { return info(kind).name; }

std::string_view to_string(Category category) {
  switch (category) {
    case Category::LogicalDesign: return "LogicalDesign";
    case Category::PhysicalDesign: return "PhysicalDesign";
    case Category::Query: return "Query";
    case Category::Data: return "Data";
  }
  return "?";
}

std::string_view to_string(DaDirection direction) {
  switch (direction) {
    case DaDirection::None: return "none";
    case DaDirection::Up: return "up";
    case DaDirection::Down: return "down";
  }
  return "none";
}

std::optional<ApKind> kind_from_string(std::string_view name) {
  for (const auto& k : kKinds)
    if (iequals(k.name, name)) return k.kind;
  return std::nullopt;
}

std::optional<Category> category_from_string(std::string_view name) {
  for (Category c : {Category::LogicalDesign, Category::PhysicalDesign, Category::Query,
                     Category::Data})
    if (iequals(to_string(c), name)) return c;
  if (iequals(name, "logical")) return Category::LogicalDesign;
  if (iequals(name, "physical")) return Category::PhysicalDesign;
  return std::nullopt;
}

const MetricsTable& default_metrics() {
  static const MetricsTable table = [] {
    MetricsTable t;
    for (const auto& k : kKinds) t[k.kind] = from_flags(k.flags);
    // Measured rows.
    t[ApKind::IndexUnderuse] = ImpactVector{1.5, 0, 0, 0, 0, 0};
    t[ApKind::EnumeratedTypes] = ImpactVector{0, 10, 2, 1, 0, 0};
    t[ApKind::MultiValuedAttribute].rp = 636;
    return t;
  }();
  return table;
}

}  // namespace sqlsmell
