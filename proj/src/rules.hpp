// Internal: built-in rule tables and shared helpers.
#pragma once

#include "sqlsmell/detect.hpp"

#include <vector>

namespace sqlsmell::detail {

std::vector<DetectionRule> intra_rules();
std::vector<DetectionRule> inter_rules();

Finding statement_finding(ApKind kind, const AnnotatedStatement& stmt, Phase phase,
                          std::string evidence);

// Indexes of non-trivia tokens in [span.begin, span.end).
std::vector<std::size_t> significant(const AnnotatedStatement& stmt, Span span);

// Column operands of `||` that are not wrapped in a null-safe function.
std::vector<ColumnRef> concat_column_operands(const AnnotatedStatement& stmt);

bool is_pattern_op(std::string_view op);
bool pattern_has_wordboundary(std::string_view rhs_text);

std::string quote(std::string_view s);

}  // namespace sqlsmell::detail
