// ---------------------------------------------------------------------------
// finding.hpp
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/catalog.hpp"
#include "sqlsmell/frontend.hpp"

#include <optional>
#include <string>

namespace sqlsmell {

enum class Phase { IntraQuery, InterQuery, Data };
enum class Confidence { Low, Medium, High };

std::string_view to_string(Phase phase);
std::string_view to_string(Confidence confidence);

struct Location {
  // Set for statement-level findings.
  std::string statement_id;
  std::optional<std::size_t> ordinal;
  std::string table;
  std::string column;
  // Index or constraint name.
  std::string object;
  // Second column involved (join partner, derived-from column, ...).
  std::optional<ColumnRef> related;

  std::string display() const;
  bool operator==(const Location&) const = default;
};

struct Finding {
  ApKind kind = ApKind::MultiValuedAttribute;
  Location location;
  std::string evidence;
  Phase phase = Phase::IntraQuery;
  Confidence confidence = Confidence::Medium;
  bool suppressed_by_context = false;
  std::string suppression_reason;
  // Hash of the context the finding was evaluated against; empty for
  // context-free findings.
  std::string context_snapshot;

  Category category() const { return info(kind).category; }
};

}  // namespace sqlsmell
