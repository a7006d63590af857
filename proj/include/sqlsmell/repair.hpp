// ---------------------------------------------------------------------------
// repair.hpp
//
// Per-kind repair rules. A rule either rewrites statements (and creates new
// ones) over the finding's statement plus every impacted statement, or falls
// back to a textual fix tailored to the context.
// ---------------------------------------------------------------------------
#pragma once

#include "sqlsmell/context.hpp"
#include "sqlsmell/finding.hpp"
#include "sqlsmell/ranker.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sqlsmell {

enum class TransformOp { RewriteExisting, CreateNew, Annotate };

std::string_view to_string(TransformOp op);

struct StatementTransformation {
  TransformOp op = TransformOp::CreateNew;
  // source_id of a registered statement, or a fresh id for CreateNew.
  std::string target;
  std::string tree_edit;
  std::string rendered;
};

struct RepairOptions {
  // Name for the intersection table created by the multi-valued attribute
  // fix. Empty: <Table>_<Referenced>_xref.
  std::string intersection_table;
};

// What a transform sees: the finding, the statements to transform (finding's
// statement first, then impacted ones in registry order) and the context.
struct RepairInput {
  const Finding& finding;
  const std::vector<const AnnotatedStatement*>& to_transform;
  const ApplicationContext& ctx;
  const RepairOptions& options;
};

struct RepairOutput {
  std::vector<StatementTransformation> transformations;
  // Warnings that accompany an automated fix (data migration, statements
  // left for manual review).
  std::vector<std::string> notes;
};

using TransformFn = std::function<std::optional<RepairOutput>(const RepairInput&)>;
using TextualFn = std::function<std::string(const Finding&, const ApplicationContext&)>;

struct RepairRule {
  ApKind kind;
  // Empty for kinds that only get textual guidance. Returns nullopt when no
  // unambiguous rewrite exists.
  TransformFn transform;
  TextualFn textual;
};

const RepairRule& repair_rule(ApKind kind);
// Replaces the built-in rule for rule.kind.
void register_repair_rule(RepairRule rule);

struct RepairPlan {
  Finding finding;
  std::optional<ScoreBreakdown> score;
  std::vector<StatementTransformation> transformations;
  std::optional<std::string> textual_fix;
  std::vector<std::string> impacted;
  std::vector<std::string> to_transform;
  std::vector<std::string> notes;
  // Indexes (into the returned plan list) of other automated plans that
  // touch the same table; apply one, then re-run.
  std::vector<std::size_t> conflicts_with;

  bool automated() const { return !transformations.empty(); }
};

// One plan per finding, in the given order. A transform that fails to render
// or produces SQL that does not reparse degrades to the textual fix with a
// note; the batch never aborts.
std::vector<RepairPlan> fix(const std::vector<RankedFinding>& findings,
                            const ApplicationContext& ctx, const RepairOptions& options = {});

std::string textual_fix(const Finding& finding, const ApplicationContext& ctx);

// The corpus with one plan applied: rewritten statements replaced in place,
// new statements appended in plan order.
std::vector<RawStatement> apply_plan(const std::vector<AnnotatedStatement>& registry,
                                     const RepairPlan& plan);

}  // namespace sqlsmell
