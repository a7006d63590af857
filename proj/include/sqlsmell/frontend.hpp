// ---------------------------------------------------------------------------
// frontend.hpp
//
// Tolerant, non-validating SQL frontend: statement splitting, tokenizing,
// clause annotation and rendering back to SQL text.
//
// The recognizer is keyword driven. A statement is classified by its leading
// keywords, clauses are cut at depth-0 keyword boundaries, and anything it
// does not understand stays in the token list as opaque text. parse() never
// throws.
// ---------------------------------------------------------------------------
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqlsmell {

enum class TokenKind {
  Keyword,
  Identifier,
  Literal,
  Operator,
  Punctuation,
  Comment,
  Whitespace,
  Opaque,
};

struct Token {
  TokenKind kind = TokenKind::Opaque;
  std::string text;
  // String literal or quoted identifier.
  bool quoted = false;

  bool operator==(const Token&) const = default;

  bool trivia() const { return kind == TokenKind::Comment || kind == TokenKind::Whitespace; }
  // Case-insensitive match of an unquoted word (keyword or bare identifier).
  bool is_word(std::string_view word) const;
  bool is_punct(char c) const;
  bool is_op(std::string_view op) const;
  bool is_string_literal() const;
};

struct TokenizeResult {
  std::vector<Token> tokens;
  // false when the input contains an unterminated quote/comment or raw
  // control bytes.
  bool ok = true;
};

TokenizeResult tokenize(std::string_view text);

// Lower-cased identifier with surrounding quotes removed.
std::string canonical(std::string_view identifier);
// Identifier with quotes removed, casing preserved.
std::string unquote(std::string_view identifier);
// Contents of a string literal ('x' -> x, '' -> ').
std::string string_literal_value(std::string_view literal);
bool iequals(std::string_view a, std::string_view b);

struct RawStatement {
  std::string text;
  std::string source_id;
};

// Splits on ';' outside string literals, quoted identifiers, comments and
// dollar-quoted bodies. Comments attach to the statement that follows them;
// a trailing comment-only chunk is dropped. Ids are "<origin>:<line>", with
// ".2", ".3" ... for later statements starting on the same line.
std::vector<RawStatement> split_statements(std::string_view corpus,
                                           std::string_view origin = "input");

enum class StatementKind {
  Select,
  Insert,
  Update,
  Delete,
  CreateTable,
  AlterTable,
  CreateIndex,
  DropX,
  Other,
};

std::string_view to_string(StatementKind kind);

enum class ClauseRole {
  Projection,
  From,
  Joins,
  Where,
  GroupBy,
  Having,
  OrderBy,
  Limit,
  Set,
  Values,
  ColumnList,
  ConstraintList,
  IndexColumns,
};

std::string_view to_string(ClauseRole role);

// Half-open range of token indexes.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const { return begin >= end; }
  bool operator==(const Span&) const = default;
};

struct ColumnRef {
  std::string table;  // empty when the qualifier could not be resolved
  std::string column;

  bool same_as(const ColumnRef& other) const;
  bool operator==(const ColumnRef&) const = default;
  std::string display() const;
};

struct TableRef {
  std::string name;
  std::string alias;
};

enum class ConstraintKind { PrimaryKey, ForeignKey, Check, Unique, NotNull };

std::string_view to_string(ConstraintKind kind);

struct ConstraintDecl {
  ConstraintKind kind = ConstraintKind::Check;
  std::optional<std::string> name;
  std::vector<std::string> columns;
  // Set for ForeignKey. target->column is empty when the reference names
  // only the table.
  std::optional<ColumnRef> target;
  // Set for Check.
  std::optional<std::string> expression_text;
  // Declared inside a column definition rather than as a table element.
  bool inline_decl = false;
  Span span;
};

struct ColumnDecl {
  std::string name;
  std::string declared_type;
  bool nullable = true;
  Span span;
};

// One comparison found in a WHERE or JOIN ... ON condition.
struct Predicate {
  ColumnRef column;
  std::string op;  // upper case: "=", "<", "LIKE", "NOT LIKE", "IN", "REGEXP", ...
  Span span;
  Span rhs;
  std::optional<ColumnRef> rhs_column;
  bool rhs_is_literal = false;
  ClauseRole clause = ClauseRole::Where;
};

struct AnnotatedStatement {
  std::string source_id;
  // Position in the application's query registry; assigned by the context
  // builder.
  std::size_t ordinal = 0;
  StatementKind kind = StatementKind::Other;
  std::vector<Token> tokens;
  std::map<ClauseRole, std::vector<Span>> clauses;

  std::vector<std::string> tables_referenced;
  std::vector<TableRef> table_refs;
  std::vector<ColumnRef> columns_referenced;
  std::vector<ConstraintDecl> constraints;
  std::vector<ColumnDecl> column_defs;
  std::vector<Predicate> predicates;

  std::optional<std::string> target_table;
  std::vector<std::string> dropped_columns;
  std::vector<std::string> dropped_constraints;
  std::optional<std::string> index_name;
  std::vector<std::string> index_columns;
  bool unique_index = false;

  bool has_wildcard_projection = false;
  std::size_t join_count = 0;
  bool distinct_present = false;
  // Set when the text could not be tokenized; the statement then holds a
  // single opaque token.
  bool diagnostic = false;

  bool has_clause(ClauseRole role) const;
  const std::vector<Span>& spans(ClauseRole role) const;
  // Concatenated token text for a span, whitespace collapsed, trimmed.
  std::string text_of(Span span) const;
  std::string text() const;
  // Resolves an alias or table name used as a qualifier in this statement.
  std::string resolve_qualifier(std::string_view qualifier) const;
  bool references_table(std::string_view table) const;
};

AnnotatedStatement parse(const RawStatement& stmt);
AnnotatedStatement parse(std::string_view text, std::string_view source_id = "");

struct RenderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Emits SQL for the (possibly edited) token list. Throws RenderError when a
// clause span no longer fits the token list.
std::string render(const AnnotatedStatement& stmt);

// Replace the tokens in `range` with the tokenization of `replacement`.
struct TokenEdit {
  Span range;
  std::string replacement;
};

// Applies non-overlapping edits and shifts clause spans. A clause span that
// only partially overlaps an edit is invalidated, which render() reports.
AnnotatedStatement apply_edits(const AnnotatedStatement& stmt, std::vector<TokenEdit> edits);

// apply_edits + render + parse. The result keeps source_id and ordinal.
AnnotatedStatement rewrite(const AnnotatedStatement& stmt, std::vector<TokenEdit> edits);

// Equality over the annotation layer: kind, clause structure, referenced
// tables/columns, constraints and the boolean/count facts.
bool same_annotations(const AnnotatedStatement& a, const AnnotatedStatement& b);

}  // namespace sqlsmell
