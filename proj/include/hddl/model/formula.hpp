#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hddl/model/types.hpp"

namespace hddl::model {

/// A variable (name without '?') or a resolved constant.
struct Term {
  enum class Kind { Variable, Constant };
  Kind kind = Kind::Variable;
  std::string name;
  ConstId constant = -1;

  static Term variable(std::string name) { return {Kind::Variable, std::move(name), -1}; }
  static Term constant_term(std::string name, ConstId id) {
    return {Kind::Constant, std::move(name), id};
  }
  bool is_variable() const { return kind == Kind::Variable; }

  friend bool operator==(const Term &, const Term &) = default;
  friend auto operator<=>(const Term &, const Term &) = default;
};

struct TypedVariable {
  std::string name;
  TypeId type = TypeHierarchy::kObject;
  friend bool operator==(const TypedVariable &, const TypedVariable &) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  friend bool operator==(const Atom &, const Atom &) = default;
  friend auto operator<=>(const Atom &, const Atom &) = default;
};

struct Formula {
  enum class Kind { True, False, Atom, Equals, Not, And, Or, Imply, Exists, Forall };

  Kind kind = Kind::True;
  model::Atom atom;               // Atom
  std::vector<Term> terms;        // Equals: two
  std::vector<Formula> children;  // Not: 1, Imply: 2, Exists/Forall: 1
  std::vector<TypedVariable> bound; // Exists/Forall

  static Formula truth() { return {}; }
  friend bool operator==(const Formula &, const Formula &) = default;
};

/// Variable constraints of a task network. Only Equal/NotEqual have surface syntax.
struct VariableConstraint {
  enum class Kind { Equal, NotEqual, OfType, NotOfType };
  Kind kind = Kind::Equal;
  Term lhs;
  Term rhs;                               // Equal/NotEqual
  TypeId type = TypeHierarchy::kObject;   // OfType/NotOfType
  friend bool operator==(const VariableConstraint &, const VariableConstraint &) = default;
};

using Substitution = std::map<std::string, ConstId>;

/// Free variables of a formula (bound quantifier variables excluded).
std::set<std::string> free_variables(const Formula &f);

/// Replaces free variables mapped by `sub` with constants.
Formula substitute(const Formula &f, const Substitution &sub, const TypeHierarchy &h);
Term substitute(const Term &t, const Substitution &sub, const TypeHierarchy &h);
Atom substitute(const Atom &a, const Substitution &sub, const TypeHierarchy &h);

/// Lisp-style rendering used in listings and diagnostics.
std::string to_string(const Term &t);
std::string to_string(const Atom &a);
std::string to_string(const Formula &f, const TypeHierarchy &h);

} // namespace hddl::model
