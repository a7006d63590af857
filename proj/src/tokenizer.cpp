// ---------------------------------------------------------------------------
// tokenizer.cpp
//
// Dialect-neutral SQL lexer and statement splitter.
// ---------------------------------------------------------------------------
#include "sqlsmell/frontend.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace sqlsmell {
namespace {

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "ADD",       "ALL",        "ALTER",     "AND",      "AS",        "ASC",
      "BETWEEN",   "BY",         "CASCADE",   "CASE",     "CHECK",     "COLLATE",
      "COLUMN",    "CONSTRAINT", "CREATE",    "CROSS",    "DEFAULT",   "DELETE",
      "DESC",      "DISTINCT",   "DROP",      "ELSE",     "END",       "EXCEPT",
      "EXISTS",    "FOREIGN",    "FROM",      "FULL",     "GROUP",     "HAVING",
      "ILIKE",     "IN",         "INDEX",     "INNER",    "INSERT",    "INTERSECT",
      "INTO",      "IS",         "JOIN",      "KEY",      "LEFT",      "LIKE",
      "LIMIT",     "NATURAL",    "NOT",       "OFFSET",   "ON",        "OR",
      "ORDER",     "OUTER",      "PRIMARY",   "REFERENCES", "REGEXP",  "RESTRICT",
      "RETURNING", "RIGHT",      "RLIKE",     "SELECT",   "SET",       "SIMILAR",
      "TABLE",     "TEMPORARY",  "THEN",      "UNION",    "UNIQUE",    "UPDATE",
      "USING",     "VALUES",     "VIEW",      "WHEN",     "WHERE",     "WITH",
  };
  return kw;
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// Scans a quoted run starting at text[i] (the opening quote). Returns the
// index one past the closing quote, or npos when unterminated. A doubled
// closing quote is an escape.
std::size_t scan_quoted(std::string_view text, std::size_t i, char close, bool backslash) {
  std::size_t j = i + 1;
  while (j < text.size()) {
    char c = text[j];
    if (backslash && c == '\\' && j + 1 < text.size()) {
      j += 2;
      continue;
    }
    if (c == close) {
      if (j + 1 < text.size() && text[j + 1] == close) {
        j += 2;
        continue;
      }
      return j + 1;
    }
    ++j;
  }
  return std::string_view::npos;
}

// $tag$ ... $tag$. Returns npos when `i` does not start a dollar quote or it
// is unterminated; `is_dollar` tells the two apart.
std::size_t scan_dollar(std::string_view text, std::size_t i, bool& is_dollar) {
  is_dollar = false;
  std::size_t j = i + 1;
  while (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_'))
    ++j;
  if (j >= text.size() || text[j] != '$') return std::string_view::npos;
  is_dollar = true;
  std::string_view tag = text.substr(i, j - i + 1);
  std::size_t close = text.find(tag, j + 1);
  if (close == std::string_view::npos) return std::string_view::npos;
  return close + tag.size();
}

constexpr std::array<std::string_view, 14> kMultiOps = {
    "->>", "!~*", "||", "<=", ">=", "<>", "!=", "==", "::", "->", "!~", "~*", "<<", ">>"};

}  // namespace

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

bool Token::is_word(std::string_view word) const {
  return (kind == TokenKind::Keyword || kind == TokenKind::Identifier ||
          kind == TokenKind::Literal) &&
         !quoted && iequals(text, word);
}

bool Token::is_punct(char c) const {
  return kind == TokenKind::Punctuation && text.size() == 1 && text[0] == c;
}

bool Token::is_op(std::string_view op) const { return kind == TokenKind::Operator && text == op; }

bool Token::is_string_literal() const {
  return kind == TokenKind::Literal && quoted;
}

std::string unquote(std::string_view id) {
  if (id.size() >= 2) {
    char f = id.front();
    char b = id.back();
    if ((f == '"' && b == '"') || (f == '`' && b == '`') || (f == '[' && b == ']'))
      return std::string(id.substr(1, id.size() - 2));
  }
  return std::string(id);
}

std::string canonical(std::string_view id) {
  std::string out = unquote(id);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string string_literal_value(std::string_view lit) {
  std::size_t open = lit.find('\'');
  if (open == std::string_view::npos || lit.size() < open + 2) return std::string(lit);
  std::string_view body = lit.substr(open + 1, lit.size() - open - 2);
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    out.push_back(body[i]);
    if (body[i] == '\'' && i + 1 < body.size() && body[i + 1] == '\'') ++i;
  }
  return out;
}

TokenizeResult tokenize(std::string_view text) {
  TokenizeResult result;
  auto& out = result.tokens;
  auto push = [&](TokenKind kind, std::size_t from, std::size_t to, bool quoted = false) {
    out.push_back(Token{kind, std::string(text.substr(from, to - from)), quoted});
  };
  auto fail = [&]() {
    result.ok = false;
    return result;
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    const char next = i + 1 < n ? text[i + 1] : '\0';

    if (std::isspace(c)) {
      std::size_t j = i;
      while (j < n && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::Whitespace, i, j);
      i = j;
    } else if (c < 0x20 || c == 0x7f) {
      return fail();
    } else if (c == '-' && next == '-') {
      std::size_t j = text.find('\n', i);
      if (j == std::string_view::npos) j = n;
      push(TokenKind::Comment, i, j);
      i = j;
    } else if (c == '/' && next == '*') {
      std::size_t j = text.find("*/", i + 2);
      if (j == std::string_view::npos) return fail();
      push(TokenKind::Comment, i, j + 2);
      i = j + 2;
    } else if (c == '\'') {
      std::size_t j = scan_quoted(text, i, '\'', false);
      if (j == std::string_view::npos) return fail();
      push(TokenKind::Literal, i, j, true);
      i = j;
    } else if ((c == 'E' || c == 'e' || c == 'N' || c == 'n' || c == 'X' || c == 'x' ||
                c == 'B' || c == 'b') &&
               next == '\'') {
      bool backslash = c == 'E' || c == 'e';
      std::size_t j = scan_quoted(text, i + 1, '\'', backslash);
      if (j == std::string_view::npos) return fail();
      push(TokenKind::Literal, i, j, true);
      i = j;
    } else if (c == '"' || c == '`') {
      std::size_t j = scan_quoted(text, i, static_cast<char>(c), false);
      if (j == std::string_view::npos) return fail();
      push(TokenKind::Identifier, i, j, true);
      i = j;
    } else if (c == '[') {
      std::size_t close = text.find(']', i);
      std::size_t eol = text.find('\n', i);
      bool bracket_ident = close != std::string_view::npos && close > i + 1 &&
                           (eol == std::string_view::npos || close < eol) &&
                           text.substr(i + 1, close - i - 1).find('[') == std::string_view::npos &&
                           (out.empty() || out.back().trivia() || out.back().is_punct('.') ||
                            out.back().is_punct(',') || out.back().is_punct('(') ||
                            out.back().kind == TokenKind::Keyword);
      if (bracket_ident) {
        push(TokenKind::Identifier, i, close + 1, true);
        i = close + 1;
      } else {
        push(TokenKind::Punctuation, i, i + 1);
        ++i;
      }
    } else if (c == '$') {
      bool is_dollar = false;
      std::size_t j = scan_dollar(text, i, is_dollar);
      if (is_dollar) {
        if (j == std::string_view::npos) return fail();
        push(TokenKind::Literal, i, j, true);
        i = j;
      } else {
        j = i + 1;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        push(j > i + 1 ? TokenKind::Literal : TokenKind::Opaque, i, j);
        i = j;
      }
    } else if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(next)))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < n && text[j] == '.') {
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      // 1abc is an identifier in some dialects; keep it in one token.
      while (j < n && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::Literal, i, j);
      i = j;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      std::string word = upper(text.substr(i, j - i));
      TokenKind kind = TokenKind::Identifier;
      if (word == "TRUE" || word == "FALSE" || word == "NULL")
        kind = TokenKind::Literal;
      else if (keywords().count(word))
        kind = TokenKind::Keyword;
      push(kind, i, j);
      i = j;
    } else if (c == '?' || ((c == ':' || c == '@') && ident_start(static_cast<unsigned char>(next)))) {
      std::size_t j = i + 1;
      while (j < n && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::Literal, i, j);
      i = j;
    } else if (c == '(' || c == ')' || c == ',' || c == ';' || c == '.' || c == ']' ||
               c == '{' || c == '}') {
      push(TokenKind::Punctuation, i, i + 1);
      ++i;
    } else {
      bool matched = false;
      for (std::string_view op : kMultiOps) {
        if (text.substr(i, op.size()) == op) {
          push(TokenKind::Operator, i, i + op.size());
          i += op.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("=<>+-*/%~!^&|").find(static_cast<char>(c)) != std::string_view::npos) {
        push(TokenKind::Operator, i, i + 1);
      } else {
        push(TokenKind::Opaque, i, i + 1);
      }
      ++i;
    }
  }
  return result;
}

std::vector<RawStatement> split_statements(std::string_view corpus, std::string_view origin) {
  std::vector<RawStatement> out;
  std::size_t start = 0;
  std::size_t line = 1;
  std::size_t start_line = 1;
  std::size_t last_line = 0, same_line = 0;

  auto flush = [&](std::size_t end) {
    std::string_view chunk = corpus.substr(start, end - start);
    // Skip if the chunk holds only whitespace and comments.
    auto toks = tokenize(chunk);
    bool has_body = !toks.ok;
    if (toks.ok)
      for (const auto& t : toks.tokens)
        if (!t.trivia()) {
          has_body = true;
          break;
        }
    if (has_body) {
      std::size_t b = chunk.find_first_not_of(" \t\r\n\f\v");
      std::size_t e = chunk.find_last_not_of(" \t\r\n\f\v");
      // Line of the first non-whitespace character.
      std::size_t first_line = start_line;
      for (std::size_t k = 0; k < b; ++k)
        if (chunk[k] == '\n') ++first_line;
      // Further statements on the same line get a .2, .3 ... suffix.
      std::string id = std::string(origin) + ":" + std::to_string(first_line);
      same_line = first_line == last_line ? same_line + 1 : 1;
      last_line = first_line;
      if (same_line > 1) id += "." + std::to_string(same_line);
      out.push_back(RawStatement{std::string(chunk.substr(b, e - b + 1)), std::move(id)});
    }
  };

  std::size_t i = 0;
  const std::size_t n = corpus.size();
  while (i < n) {
    char c = corpus[i];
    char next = i + 1 < n ? corpus[i + 1] : '\0';
    std::size_t skip_to = i + 1;
    if (c == '-' && next == '-') {
      skip_to = corpus.find('\n', i);
      if (skip_to == std::string_view::npos) skip_to = n;
    } else if (c == '/' && next == '*') {
      skip_to = corpus.find("*/", i + 2);
      skip_to = skip_to == std::string_view::npos ? n : skip_to + 2;
    } else if (c == '\'' || c == '"' || c == '`') {
      skip_to = scan_quoted(corpus, i, c, false);
      if (skip_to == std::string_view::npos) skip_to = n;
    } else if (c == '$') {
      bool is_dollar = false;
      std::size_t j = scan_dollar(corpus, i, is_dollar);
      if (is_dollar) skip_to = j == std::string_view::npos ? n : j;
    } else if (c == ';') {
      for (std::size_t k = start; k < i; ++k)
        if (corpus[k] == '\n') ++line;
      flush(i);
      // Newlines before `start` were counted into `line`.
      start = i + 1;
      start_line = line;
    }
    i = skip_to;
  }
  if (start < n) flush(n);
  return out;
}

}  // namespace sqlsmell
