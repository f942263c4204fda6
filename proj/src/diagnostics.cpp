#include "hddl/diagnostics.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

namespace hddl {

SourceSpan merge(const SourceSpan &first, const SourceSpan &last) {
  SourceSpan out = first;
  if (std::tie(last.end_line, last.end_col) >
      std::tie(first.end_line, first.end_col)) {
    out.end_line = last.end_line;
    out.end_col = last.end_col;
  }
  return out;
}

const char *to_string(Severity severity) {
  switch (severity) {
  case Severity::Error:
    return "error";
  case Severity::Warning:
    return "warning";
  case Severity::Note:
    return "note";
  }
  return "error";
}

std::string format_diagnostic(const Diagnostic &diag, bool color) {
  std::string out = diag.span.file + ":" + std::to_string(diag.span.start_line) +
                    ":" + std::to_string(diag.span.start_col) + ": ";
  if (color) {
    const char *code = diag.severity == Severity::Error     ? "\033[1;31m"
                       : diag.severity == Severity::Warning ? "\033[1;35m"
                                                            : "\033[1;36m";
    out += code;
    out += to_string(diag.severity);
    out += "\033[0m";
  } else {
    out += to_string(diag.severity);
  }
  out += ": " + diag.message;
  if (!diag.code.empty())
    out += " [" + diag.code + "]";
  return out;
}

std::string diagnostic_json(const Diagnostic &diag) {
  nlohmann::json j;
  j["file"] = diag.span.file;
  j["line"] = diag.span.start_line;
  j["col"] = diag.span.start_col;
  j["severity"] = to_string(diag.severity);
  j["code"] = diag.code;
  j["message"] = diag.message;
  return j.dump();
}

bool has_errors(const std::vector<Diagnostic> &diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic &d) {
    return d.severity == Severity::Error;
  });
}

DiagnosticError::DiagnosticError(Diagnostic diag)
    : std::runtime_error(format_diagnostic(diag)), diag_(std::move(diag)) {}

} // namespace hddl
