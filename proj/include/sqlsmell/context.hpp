// ---------------------------------------------------------------------------
// context.hpp
//
// ApplicationContext: schemas, indexes, the query registry, the join graph
// and (with a dataset) column profiles. Built once per run, read-only after.
// All lookups use canonical (case-insensitive, unquoted) names.
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/config.hpp"
#include "sqlsmell/dataset.hpp"
#include "sqlsmell/finding.hpp"
#include "sqlsmell/frontend.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sqlsmell {

struct IndexDecl {
  std::string name;
  std::vector<std::string> columns;
  std::string source_id;
  bool unique = false;
  // Backing index of a PRIMARY KEY / UNIQUE constraint.
  bool implicit = false;
  bool primary = false;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnDecl> columns;
  std::vector<ConstraintDecl> constraints;
  std::vector<IndexDecl> indexes;
  // Statements that declared or altered the table.
  std::vector<std::string> source_ids;
  std::optional<std::size_t> first_ordinal;
  bool from_ddl = false;
  bool from_data = false;

  const ColumnDecl* column(std::string_view name) const;
  bool has_column(std::string_view name) const { return column(name) != nullptr; }
  bool has_primary_key() const;
  std::vector<std::string> primary_key() const;
  bool has_check_on(std::string_view column) const;
  bool not_null(std::string_view column) const;
  // Foreign key declared on `column` (any form), if any.
  const ConstraintDecl* foreign_key_on(std::string_view column) const;
};

enum class ValueClass { Integer, Decimal, Text, DateTime, Boolean, Mixed };

std::string_view to_string(ValueClass value_class);

struct ColumnProfile {
  std::string table;
  std::string column;
  std::string declared_type;
  std::size_t row_count_sampled = 0;
  std::size_t distinct_count = 0;
  double null_fraction = 0;
  ValueClass inferred_value_class = ValueClass::Mixed;
  double delimiter_list_fraction = 0;
  double constant_fraction = 0;
  bool timezone_annotated = false;
  std::vector<Cell> sample;
};

struct SampledTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::string> declared_types;
  std::vector<Row> rows;
  std::size_t total_rows = 0;
};

struct JoinEdge {
  ColumnRef left;
  ColumnRef right;
  // First statement in which the pair was observed.
  std::string source_id;
  std::size_t ordinal = 0;
};

struct ApplicationContext {
  std::map<std::string, TableSchema> schemas;
  std::vector<AnnotatedStatement> query_registry;
  std::vector<JoinEdge> join_graph;
  std::map<std::pair<std::string, std::string>, ColumnProfile> profiles;
  std::map<std::string, SampledTable> samples;
  BuildConfig config;
  bool has_dataset = false;
  std::vector<std::string> warnings;
  std::string snapshot;

  const TableSchema* table(std::string_view name) const;
  const ColumnProfile* profile(std::string_view table, std::string_view column) const;
  const SampledTable* sample(std::string_view table) const;
  // Statements whose table/column facts mention `table` (and `column`,
  // when given).
  bool joined(const ColumnRef& a, const ColumnRef& b) const;
};

// Assigns ordinals in list order, builds schemas from DDL (and the dataset's
// stored DDL), the join graph, and profiles when a dataset is given. Dataset
// failures are recorded in warnings and the context stays in DDL-only mode.
ApplicationContext build_context(std::vector<AnnotatedStatement> queries,
                                 DatasetAdapter* dataset, const BuildConfig& config);

// Registered statements that touch the finding's table/column, in registry
// order.
std::vector<AnnotatedStatement> impacted_queries(const ApplicationContext& ctx,
                                                 const Finding& finding);
bool statement_touches(const AnnotatedStatement& stmt, const ApplicationContext& ctx,
                       std::string_view table, std::string_view column);

bool textual_type(std::string_view declared_type);
bool numeric_type(std::string_view declared_type);

}  // namespace sqlsmell
