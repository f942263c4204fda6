#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hddl/model/model.hpp"

namespace hddl::grounding {

using model::ConstId;
using AtomId = int;
using ActionId = int;
using TaskIdx = int;
using MethodId = int;

struct GroundAtom {
  std::string predicate;
  std::vector<ConstId> args;
  friend bool operator==(const GroundAtom &, const GroundAtom &) = default;
  friend auto operator<=>(const GroundAtom &, const GroundAtom &) = default;
};

/// Interns ground atoms to dense ids.
class AtomTable {
public:
  AtomId intern(const GroundAtom &a);
  std::optional<AtomId> find(const GroundAtom &a) const;
  const GroundAtom &atom(AtomId id) const { return atoms_[id]; }
  std::size_t size() const { return atoms_.size(); }
  std::string to_string(AtomId id, const model::TypeHierarchy &h) const;

private:
  std::vector<GroundAtom> atoms_;
  std::map<GroundAtom, AtomId> index_;
};

/// Quantifier-free ground condition. The builders fold constants.
struct Condition {
  enum class Kind { True, False, Atom, Not, And, Or };
  Kind kind = Kind::True;
  AtomId atom = -1;
  std::vector<Condition> children;

  static Condition truth() { return {}; }
  static Condition falsity() { return {Kind::False, -1, {}}; }
  static Condition of_atom(AtomId a) { return {Kind::Atom, a, {}}; }
  static Condition negation(Condition c);
  static Condition conjunction(std::vector<Condition> cs);
  static Condition disjunction(std::vector<Condition> cs);

  friend bool operator==(const Condition &, const Condition &) = default;
};

struct GroundConditional {
  Condition condition;
  std::vector<AtomId> add;
  std::vector<AtomId> del;
  friend bool operator==(const GroundConditional &, const GroundConditional &) = default;
};

struct GroundAction {
  std::string name;
  std::vector<ConstId> args;
  std::string key; // name[c1,c2]
  Condition precondition;
  std::vector<AtomId> add;
  std::vector<AtomId> del;
  std::vector<GroundConditional> conditional;
  bool synthetic = false;
  friend bool operator==(const GroundAction &, const GroundAction &) = default;
};

struct GroundTask {
  std::string key;
  std::string name;
  std::vector<ConstId> args;
  bool primitive = false;
  ActionId action = -1;          // primitive tasks
  std::vector<MethodId> methods; // compound tasks, in method declaration order
  friend bool operator==(const GroundTask &, const GroundTask &) = default;
};

using GroundNetwork = model::TaskNetwork<TaskIdx>;

struct GroundMethod {
  std::string key; // name[c1,c2] over the method parameters
  std::string name;
  std::vector<ConstId> args;
  TaskIdx task = -1;
  GroundNetwork network; // no variable constraints left
  friend bool operator==(const GroundMethod &, const GroundMethod &) = default;
};

struct GroundStats {
  std::size_t atoms = 0;
  std::size_t static_predicates = 0;
  std::size_t actions = 0;
  std::size_t compound_tasks = 0;
  std::size_t methods = 0;
  std::size_t pruned_actions = 0;
  std::size_t pruned_compound_tasks = 0;
  std::size_t pruned_methods = 0;
};

struct GroundModel {
  std::shared_ptr<const model::Model> model;
  AtomTable atoms;
  std::vector<GroundAction> actions;
  std::vector<GroundTask> tasks;
  std::vector<GroundMethod> methods;
  std::vector<AtomId> initial_state; // sorted
  GroundNetwork initial_network;
  std::optional<Condition> goal;
  /// Set when htn parameters made the initial network a single `__top` task.
  bool synthetic_top = false;
  GroundStats stats;

  std::optional<TaskIdx> find_task(const std::string &key) const;
  const model::TypeHierarchy &types() const { return model->types; }

  std::unordered_map<std::string, TaskIdx> task_index;
};

using Binding = std::vector<ConstId>; // aligned with the parameter list

/// Every type-consistent binding of `params` satisfying `vc`, in
/// lexicographic order of the per-type constant lists. Serial reference.
std::vector<Binding> substitutions(const std::vector<model::TypedVariable> &params,
                                   const model::TypeHierarchy &h,
                                   const std::vector<model::VariableConstraint> &vc = {});

/// Same result and order as `substitutions`, split across OpenMP threads
/// on the first parameter.
std::vector<Binding> substitutions_parallel(const std::vector<model::TypedVariable> &params,
                                            const model::TypeHierarchy &h,
                                            const std::vector<model::VariableConstraint> &vc = {});

model::Substitution to_substitution(const std::vector<model::TypedVariable> &params,
                                    const Binding &binding);

struct GroundOptions {
  bool parallel = true;
  bool prune = true;
  /// Upper bound on enumerated bindings; exceeding it raises "ground-limit".
  std::size_t max_instances = 5'000'000;
};

/// Instantiates a model whose method preconditions were compiled away.
/// Throws DiagnosticError with code "ground-infeasible", "ground-limit" or
/// "uncompiled-method-precondition".
GroundModel ground(const model::Model &m, const GroundOptions &options = {});

/// Keeps the tasks reachable from the initial network through methods and
/// every method of a kept compound task.
GroundModel reachability_prune(const GroundModel &g);

/// `name[c1,c2]`.
std::string ground_key(const std::string &name, const std::vector<ConstId> &args,
                       const model::TypeHierarchy &h);

std::string to_string(const Condition &c, const GroundModel &g);

/// Line-oriented dump for diffing: one atom, action, task or method per line.
std::string ground_listing(const GroundModel &g);

} // namespace hddl::grounding
