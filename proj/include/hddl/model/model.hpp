#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hddl/diagnostics.hpp"
#include "hddl/model/formula.hpp"
#include "hddl/model/task_network.hpp"
#include "hddl/model/types.hpp"
#include "hddl/syntax/ast.hpp"

namespace hddl::model {

struct PredicateDecl {
  std::string name;
  std::vector<TypeId> parameters;
  friend bool operator==(const PredicateDecl &, const PredicateDecl &) = default;
};

/// Effects under a `forall` and/or `when`; evaluated against the state the
/// action is applied in.
struct ConditionalEffect {
  std::vector<TypedVariable> forall;
  Formula condition;
  std::vector<Atom> add;
  std::vector<Atom> del;
  friend bool operator==(const ConditionalEffect &, const ConditionalEffect &) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedVariable> parameters;
  Formula precondition;
  std::vector<Atom> add;
  std::vector<Atom> del;
  std::vector<ConditionalEffect> conditional;
  /// Set for actions produced by compile_method_preconditions.
  bool synthetic = false;
  friend bool operator==(const ActionSchema &, const ActionSchema &) = default;
};

struct CompoundTaskSchema {
  std::string name;
  std::vector<TypedVariable> parameters;
  friend bool operator==(const CompoundTaskSchema &, const CompoundTaskSchema &) = default;
};

/// A task occurrence in a lifted network: task name and argument terms.
struct TaskInstance {
  std::string name;
  std::vector<Term> args;
  friend bool operator==(const TaskInstance &, const TaskInstance &) = default;
  friend auto operator<=>(const TaskInstance &, const TaskInstance &) = default;
};

using LiftedNetwork = TaskNetwork<TaskInstance>;

struct MethodSchema {
  std::string name;
  std::vector<TypedVariable> parameters;
  TaskInstance task;
  LiftedNetwork network; // constraints hold the method's VC
  std::optional<Formula> precondition;
  friend bool operator==(const MethodSchema &, const MethodSchema &) = default;
};

struct GroundFact {
  std::string predicate;
  std::vector<ConstId> args;
  friend bool operator==(const GroundFact &, const GroundFact &) = default;
  friend auto operator<=>(const GroundFact &, const GroundFact &) = default;
};

/// Validated lifted domain and problem.
struct Model {
  std::string domain_name;
  std::string problem_name;
  std::set<std::string> requirements; // declared, after expansion
  TypeHierarchy types;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;
  std::vector<CompoundTaskSchema> compound_tasks;
  std::vector<MethodSchema> methods;
  std::vector<GroundFact> init; // positive facts, declaration order, no duplicates
  std::vector<TypedVariable> htn_parameters;
  LiftedNetwork initial_network;
  std::optional<Formula> goal;

  const PredicateDecl *find_predicate(std::string_view name) const;
  const ActionSchema *find_action(std::string_view name) const;
  const CompoundTaskSchema *find_compound_task(std::string_view name) const;
  const MethodSchema *find_method(std::string_view name) const;
  std::vector<const MethodSchema *> methods_for(std::string_view task) const;
  bool has_method_preconditions() const;

  friend bool operator==(const Model &, const Model &) = default;
};

struct AnalyzeOptions {
  /// Report missing requirement flags as errors instead of warnings.
  bool strict_requirements = false;
};

struct AnalysisResult {
  std::optional<Model> model; // empty iff diagnostics contain an error
  std::vector<Diagnostic> diagnostics;
};

AnalysisResult analyze(const syntax::AstDomain &domain, const syntax::AstProblem &problem,
                       const AnalyzeOptions &options = {});

/// nullopt when the ordering's transitive closure is irreflexive; otherwise
/// an id cycle. Throws DiagnosticError ("unknown-ordering-id") when a pair
/// mentions an id that no subtask declares.
std::optional<std::vector<std::string>> check_partial_order(const syntax::AstTaskNetwork &net);

/// Replaces every method precondition by a fresh effectless action ordered
/// before all of the method's subtasks.
Model compile_method_preconditions(Model model);

std::string to_string(const TaskInstance &t);

} // namespace hddl::model
