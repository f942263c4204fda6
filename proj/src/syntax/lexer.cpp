#include "hddl/syntax/lexer.hpp"

#include <cctype>

namespace hddl::syntax {

const char *to_string(TokenKind kind) {
  switch (kind) {
  case TokenKind::LParen:
    return "'('";
  case TokenKind::RParen:
    return "')'";
  case TokenKind::Keyword:
    return "keyword";
  case TokenKind::Variable:
    return "variable";
  case TokenKind::Identifier:
    return "name";
  case TokenKind::Dash:
    return "'-'";
  case TokenKind::Less:
    return "'<'";
  case TokenKind::End:
    return "end of input";
  }
  return "token";
}

std::string Token::spelling() const {
  switch (kind) {
  case TokenKind::Keyword:
    return ":" + text;
  case TokenKind::Variable:
    return "?" + text;
  case TokenKind::Identifier:
    return text;
  default:
    return to_string(kind);
  }
}

namespace {

bool is_name_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '-' || c == '_';
}

class Lexer {
public:
  Lexer(std::string_view text, std::string_view file)
      : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= text_.size())
        break;
      out.push_back(next());
    }
    Token end;
    end.kind = TokenKind::End;
    end.span = span_here(line_, col_, line_, col_);
    out.push_back(std::move(end));
    return out;
  }

private:
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  SourceSpan span_here(int l0, int c0, int l1, int c1) const {
    return SourceSpan{std::string(file_), l0, c0, l1, c1};
  }

  Token single(TokenKind kind) {
    Token t;
    t.kind = kind;
    t.text = std::string(1, text_[pos_]);
    t.span = span_here(line_, col_, line_, col_);
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string &message, int line, int col) {
    throw DiagnosticError(Diagnostic{Severity::Error, "lex-error", message,
                                     span_here(line, col, line, col)});
  }

  std::string read_name() {
    std::string out;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) {
      out.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(text_[pos_]))));
      advance();
    }
    return out;
  }

  Token next() {
    const char c = text_[pos_];
    switch (c) {
    case '(':
      return single(TokenKind::LParen);
    case ')':
      return single(TokenKind::RParen);
    case '<':
      return single(TokenKind::Less);
    case '=': {
      Token t = single(TokenKind::Identifier);
      return t;
    }
    case '-':
      // A dash glued to a following name is not valid HDDL; names never
      // start with '-'.
      if (pos_ + 1 < text_.size() && is_name_char(text_[pos_ + 1]))
        fail("names may not start with '-'", line_, col_);
      return single(TokenKind::Dash);
    default:
      break;
    }

    const int line = line_;
    const int col = col_;
    Token t;
    if (c == ':' || c == '?') {
      t.kind = c == ':' ? TokenKind::Keyword : TokenKind::Variable;
      advance();
      t.text = read_name();
      if (t.text.empty())
        fail(std::string("expected a name after '") + c + "'", line, col);
    } else if (is_name_char(c)) {
      t.kind = TokenKind::Identifier;
      t.text = read_name();
    } else {
      const auto u = static_cast<unsigned char>(c);
      std::string shown = std::isprint(u) ? std::string(1, c)
                                          : "\\x" + hex_byte(u);
      fail("illegal character '" + shown + "'", line, col);
    }
    t.span = span_here(line, col, line_, col_ - 1);
    return t;
  }

  static std::string hex_byte(unsigned char u) {
    static const char *digits = "0123456789abcdef";
    return {digits[u >> 4], digits[u & 0xf]};
  }

  std::string_view text_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

} // namespace

std::vector<Token> tokenize(std::string_view text, std::string_view file) {
  return Lexer(text, file).run();
}

} // namespace hddl::syntax
