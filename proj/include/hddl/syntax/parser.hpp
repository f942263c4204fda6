#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "hddl/syntax/ast.hpp"
#include "hddl/syntax/lexer.hpp"

namespace hddl::syntax {

/// Parse a `<domain>`. Throws DiagnosticError (code "syntax-error" or
/// "untyped-list") on the first syntax error.
AstDomain parse_domain(const std::vector<Token> &tokens);

/// Parse a `<problem>`. Same error behaviour as parse_domain.
AstProblem parse_problem(const std::vector<Token> &tokens);

AstDomain parse_domain_text(std::string_view text,
                            std::string_view file = "<domain>");
AstProblem parse_problem_text(std::string_view text,
                              std::string_view file = "<problem>");

/// Parses either file kind, deciding by the `(define (domain|problem ...`
/// header.
std::variant<AstDomain, AstProblem> parse_any_text(std::string_view text,
                                                   std::string_view file);

} // namespace hddl::syntax
