#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hddl/execution/execution.hpp"
#include "hddl/grounding/ground.hpp"

namespace hddl::verification {

using grounding::GroundMethod;
using grounding::GroundModel;
using grounding::GroundNetwork;
using grounding::MethodId;
using grounding::TaskIdx;
using model::TaskId;

// ---- decomposition -------------------------------------------------------

class DecompositionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Decomposes task `i` of `tn1` with `gm`, naming the method's subtasks by
/// `renaming` (method id -> fresh id). Throws DecompositionError when `i`
/// is not in the network, its task is not the method's task, or the
/// renaming is incomplete or not fresh.
GroundNetwork decompose_step(const GroundNetwork &tn1, const TaskId &i, const GroundMethod &gm,
                             const std::map<TaskId, TaskId> &renaming);

/// As above with fresh ids `i.x` for each method id `x`.
GroundNetwork decompose_step(const GroundNetwork &tn1, const TaskId &i, const GroundMethod &gm);

// ---- witnesses -----------------------------------------------------------

/// A node of a decomposition tree. Leaves carry a primitive task and no
/// method. For inner nodes `children[k]` realizes `network.ids[k]` of the
/// method.
struct TreeNode {
  TaskIdx task = -1;
  std::optional<MethodId> method;
  std::vector<TaskId> children;
  friend bool operator==(const TreeNode &, const TreeNode &) = default;
};

/// `roots[k]` realizes `initial_network.ids[k]`.
struct DecompositionTree {
  std::vector<TaskId> roots;
  std::map<TaskId, TreeNode> nodes;
  friend bool operator==(const DecompositionTree &, const DecompositionTree &) = default;
};

/// Leaf ids in execution order.
struct Plan {
  std::vector<TaskId> steps;
  friend bool operator==(const Plan &, const Plan &) = default;
};

/// Text-level witness, before resolution against a ground model.
struct Witness {
  struct Action {
    std::string id, name;
    std::vector<std::string> args;
    int line = 0;
  };
  struct Node {
    std::string id, task;
    std::vector<std::string> args;
    std::string method;
    std::vector<std::string> children;
    int line = 0;
  };
  std::vector<Action> actions;
  std::vector<std::string> roots;
  int root_line = 0;
  std::vector<Node> nodes;
};

/// Throws DiagnosticError ("malformed-witness") on syntax errors.
Witness parse_witness(std::string_view text, std::string_view file = "<witness>");

/// Leaves are numbered 0..n-1 in plan order, inner nodes continue from n.
std::string write_witness(const GroundModel &g, const Plan &plan, const DecompositionTree &tree);

// ---- verdicts ------------------------------------------------------------

enum class Stage { Parse, Mapping, Method, Ordering, Executability, Goal };
const char *to_string(Stage s);

struct Failure {
  Stage stage = Stage::Mapping;
  std::string detail;
  std::string location; // witness line or step, when known
};

struct Verdict {
  bool accepted = false;
  std::optional<Failure> failure;
  static Verdict accept() { return {true, std::nullopt}; }
  static Verdict reject(Stage s, std::string detail, std::string location = {}) {
    return {false, Failure{s, std::move(detail), std::move(location)}};
  }
};

struct Resolved {
  Plan plan;
  DecompositionTree tree;
};

/// Maps witness names to ground tasks and methods, aligning children with
/// method networks. Failures are mapping or method verdicts.
std::variant<Resolved, Verdict> resolve_witness(const GroundModel &g, const Witness &w);

/// Replays the tree from the initial network, then checks the plan
/// against the replayed order and runs it from the initial state.
Verdict verify(const GroundModel &g, const Plan &plan, const DecompositionTree &tree);

Verdict verify_witness(const GroundModel &g, const Witness &w);

// ---- oracle --------------------------------------------------------------

struct Solution {
  Plan plan;
  DecompositionTree tree;
};

struct EnumerationResult {
  std::vector<Solution> solutions; // sorted by witness text
  bool complete = true;            // false when the node budget ran out
  std::size_t nodes = 0;
};

/// Every solution with at most `max_depth` decompositions and `max_len`
/// actions. Brute force; for small instances only.
EnumerationResult enumerate_solutions(const GroundModel &g, std::size_t max_depth, std::size_t max_len,
                                      std::size_t node_budget = 1'000'000, bool parallel = true);

} // namespace hddl::verification
