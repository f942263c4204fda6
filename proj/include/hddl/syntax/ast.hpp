#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hddl/box.hpp"
#include "hddl/diagnostics.hpp"

namespace hddl::syntax {

/// Source location attached to AST nodes. Spans never take part in AST
/// equality, so `==` on any node compares structure only.
struct NodeSpan {
  SourceSpan value;
  friend bool operator==(const NodeSpan &, const NodeSpan &) { return true; }
};

struct AstTerm {
  bool is_variable = false;
  std::string name; // without the leading '?'
  NodeSpan span;
  friend bool operator==(const AstTerm &, const AstTerm &) = default;
};

/// `<type>`: a primitive type, or `(either t1 t2 ...)`.
struct AstType {
  std::vector<std::string> names;
  bool either = false;
  friend bool operator==(const AstType &, const AstType &) = default;
};

/// One element of a `<typed list (x)>`. `type` is empty only for base types
/// in `:types`, for untyped forall-effect variables, and for elements the
/// parser rejects.
struct AstTypedName {
  std::string name; // without the leading '?' for variables
  bool is_variable = false;
  std::optional<AstType> type;
  NodeSpan span;
  friend bool operator==(const AstTypedName &, const AstTypedName &) = default;
};

using AstTypedList = std::vector<AstTypedName>;

struct AstAtom {
  std::string predicate;
  std::vector<AstTerm> args;
  NodeSpan span;
  friend bool operator==(const AstAtom &, const AstAtom &) = default;
};

/// `<gd>`. Requirement-gated constructors record the requirement key that
/// licenses them (without the leading ':'); ungated ones leave it empty.
struct AstGd {
  enum class Kind { Empty, Atom, Equals, Not, And, Or, Imply, Exists, Forall };

  Kind kind = Kind::Empty;
  AstAtom atom;                 // Atom
  std::vector<AstTerm> terms;   // Equals: exactly two
  std::vector<AstGd> children;  // Not: 1, Imply: 2, Exists/Forall: 1
  AstTypedList variables;       // Exists/Forall
  std::string requirement;
  NodeSpan span;

  friend bool operator==(const AstGd &, const AstGd &) = default;
};

/// `<effect>`, `<c-effect>`, `<p-effect>` and `<cond-effect>` share one
/// node type. `when` bodies contain only Add/Delete (possibly under And).
struct AstEffect {
  enum class Kind { Empty, And, Add, Delete, Forall, When };

  Kind kind = Kind::Empty;
  AstAtom atom;                   // Add/Delete
  std::vector<AstEffect> children; // And: n, Forall/When: 1
  AstTypedList variables;         // Forall
  Box<AstGd> condition;           // When
  std::string requirement;
  NodeSpan span;

  friend bool operator==(const AstEffect &, const AstEffect &) = default;
};

struct AstSubtask {
  std::optional<std::string> id;
  std::string task;
  std::vector<AstTerm> args;
  NodeSpan span;
  friend bool operator==(const AstSubtask &, const AstSubtask &) = default;
};

struct AstOrdering {
  std::string before;
  std::string after;
  NodeSpan span;
  friend bool operator==(const AstOrdering &, const AstOrdering &) = default;
};

struct AstConstraint {
  bool negated = false; // (not (= a b))
  AstTerm lhs;
  AstTerm rhs;
  NodeSpan span;
  friend bool operator==(const AstConstraint &, const AstConstraint &) = default;
};

/// `<tasknetwork-def>`.
struct AstTaskNetwork {
  /// Which spelling introduced the subtasks: `[ordered-]tasks` or
  /// `[ordered-]subtasks`.
  enum class Keyword { Subtasks, Tasks };

  std::vector<AstSubtask> subtasks;
  Keyword keyword = Keyword::Subtasks;
  bool totally_ordered = false;
  std::vector<AstOrdering> orderings; // empty when totally_ordered
  std::vector<AstConstraint> constraints;
  NodeSpan span;

  friend bool operator==(const AstTaskNetwork &, const AstTaskNetwork &) = default;
};

struct AstPredicate {
  std::string name;
  AstTypedList parameters;
  NodeSpan span;
  friend bool operator==(const AstPredicate &, const AstPredicate &) = default;
};

/// `(:task name :parameters (...))`.
struct AstTaskDef {
  std::string name;
  AstTypedList parameters;
  NodeSpan span;
  friend bool operator==(const AstTaskDef &, const AstTaskDef &) = default;
};

struct AstTaskRef {
  std::string name;
  std::vector<AstTerm> args;
  NodeSpan span;
  friend bool operator==(const AstTaskRef &, const AstTaskRef &) = default;
};

struct AstMethod {
  std::string name;
  AstTypedList parameters;
  AstTaskRef task;
  std::optional<AstGd> precondition;
  AstTaskNetwork network;
  NodeSpan span;
  friend bool operator==(const AstMethod &, const AstMethod &) = default;
};

struct AstAction {
  std::string name;
  AstTypedList parameters;
  std::optional<AstGd> precondition;
  std::optional<AstEffect> effect;
  NodeSpan span;
  friend bool operator==(const AstAction &, const AstAction &) = default;
};

struct AstDomain {
  std::string name;
  std::vector<std::string> requirements; // keys without ':'
  AstTypedList types;                    // untyped entries are base types
  AstTypedList constants;
  std::vector<AstPredicate> predicates;
  std::vector<AstTaskDef> tasks;
  std::vector<AstMethod> methods;
  std::vector<AstAction> actions;
  NodeSpan span;
  friend bool operator==(const AstDomain &, const AstDomain &) = default;
};

/// `(<p-class> [:parameters (...)] <tasknetwork-def>)`.
struct AstHtn {
  std::string problem_class = "htn";
  std::optional<AstTypedList> parameters;
  AstTaskNetwork network;
  NodeSpan span;
  friend bool operator==(const AstHtn &, const AstHtn &) = default;
};

struct AstInitLiteral {
  bool positive = true;
  AstAtom atom;
  NodeSpan span;
  friend bool operator==(const AstInitLiteral &, const AstInitLiteral &) = default;
};

struct AstProblem {
  std::string name;
  std::string domain_name;
  std::vector<std::string> requirements;
  AstTypedList objects;
  std::optional<AstHtn> htn;
  std::vector<AstInitLiteral> init;
  std::optional<AstGd> goal;
  NodeSpan span;
  friend bool operator==(const AstProblem &, const AstProblem &) = default;
};

} // namespace hddl::syntax
