#pragma once

#include <string>

#include "hddl/syntax/ast.hpp"

namespace hddl::syntax {

/// Canonical HDDL text for a domain. The result has no trailing newline;
/// an empty domain named `d` prints as "(define (domain d)\n)".
std::string emit(const AstDomain &domain);

/// Canonical HDDL text for a problem, without a trailing newline.
std::string emit(const AstProblem &problem);

/// Single-line renderings used by diagnostics and ground listings.
std::string emit(const AstGd &gd);
std::string emit(const AstEffect &effect);
std::string emit(const AstTypedList &list);

} // namespace hddl::syntax
