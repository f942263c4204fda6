#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hddl/diagnostics.hpp"

namespace hddl::syntax {

enum class TokenKind {
  LParen,
  RParen,
  Keyword,    // `:name`, text holds `name`
  Variable,   // `?name`, text holds `name`
  Identifier, // names, including `=`
  Dash,
  Less,
  End,
};

const char *to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceSpan span;

  /// Human-readable form used in diagnostics, e.g. `:task` or `?l`.
  std::string spelling() const;
};

/// Splits HDDL text into tokens. Letters are folded to lower case and `;`
/// comments run to end of line. The returned sequence always ends with an
/// End token. Throws DiagnosticError on an illegal character.
std::vector<Token> tokenize(std::string_view text,
                            std::string_view file = "<input>");

} // namespace hddl::syntax
