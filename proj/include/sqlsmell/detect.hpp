// ---------------------------------------------------------------------------
// detect.hpp
//
// Rule registry and the three detection phases.
//
//   intra  - one statement, no context
//   inter  - statement + ApplicationContext; also confirms or suppresses
//            intra findings
//   data   - column profiles (see profiler.hpp)
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/context.hpp"
#include "sqlsmell/finding.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sqlsmell {

using RuleFn =
    std::function<std::vector<Finding>(const AnnotatedStatement&, const ApplicationContext&)>;

struct DetectionRule {
  ApKind kind;
  std::string id;
  Phase phase;  // IntraQuery or InterQuery
  std::vector<StatementKind> applicable;
  RuleFn detect;

  bool applies_to(StatementKind kind) const;
};

// Built-in rules in registry order. Intra rules never read anything from the
// context except its thresholds.
const std::vector<DetectionRule>& rule_registry();
// Adds a rule at the end of the registry. Not thread-safe; register before
// detecting.
void register_rule(DetectionRule rule);

// Rules (both phases) applicable to the statement's kind, in registry order.
std::vector<const DetectionRule*> rules_for_query(const AnnotatedStatement& stmt);

std::vector<Finding> detect_intra(const AnnotatedStatement& stmt, const BuildConfig& config = {});

// Context-only findings anchored at this statement.
std::vector<Finding> detect_inter(const AnnotatedStatement& stmt, const ApplicationContext& ctx);

// Contextual confirmation/suppression of intra findings. Only flips
// suppressed_by_context or raises confidence; never adds or removes.
void apply_context(std::vector<Finding>& intra, const ApplicationContext& ctx);

struct DetectOptions {
  bool inter = true;
  bool data = true;
  std::size_t workers = 1;
};

// Intra findings (statement order, registry order), then inter, then data.
// A data-phase MultiValuedAttribute/EnumeratedTypes finding that matches an
// earlier finding on the same column is folded into it as a confirmation.
std::vector<Finding> detect_all(const ApplicationContext& ctx, const DetectOptions& options = {});

}  // namespace sqlsmell
