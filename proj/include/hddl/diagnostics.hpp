#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hddl {

/// 1-based source region; end is inclusive of the last character.
struct SourceSpan {
  std::string file;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;

  friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

/// Smallest span covering both arguments (same file assumed).
SourceSpan merge(const SourceSpan &first, const SourceSpan &last);

enum class Severity { Error, Warning, Note };

const char *to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
};

/// `file:line:col: severity: message`, optionally with ANSI colour on the
/// severity word.
std::string format_diagnostic(const Diagnostic &diag, bool color = false);

/// One-line JSON object {file, line, col, severity, code, message}.
std::string diagnostic_json(const Diagnostic &diag);

bool has_errors(const std::vector<Diagnostic> &diags);

/// Raised by the lexer and parser; carries exactly one error diagnostic.
class DiagnosticError : public std::runtime_error {
public:
  explicit DiagnosticError(Diagnostic diag);
  const Diagnostic &diagnostic() const noexcept { return diag_; }

private:
  Diagnostic diag_;
};

} // namespace hddl
