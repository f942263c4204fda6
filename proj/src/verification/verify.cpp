#include <algorithm>
#include <limits>
#include <set>

#include "hddl/verification/verify.hpp"

namespace hddl::verification {

namespace {

std::string line_of(int line) { return line > 0 ? "line " + std::to_string(line) : std::string{}; }

std::string key_of(const std::string &name, const std::vector<std::string> &args) {
  std::string key = name + "[";
  for (std::size_t k = 0; k < args.size(); ++k)
    key += (k ? "," : "") + args[k];
  return key + "]";
}

struct Span {
  int lo = std::numeric_limits<int>::max();
  int hi = -1;
  bool empty() const { return hi < 0; }
};

/// Assigns `children` to the ids of `net` so that labels agree and, where
/// possible, the leaf positions respect the network order. Falls back to
/// a label-only assignment (the ordering stage reports the conflict).
std::optional<std::vector<TaskId>> align(const GroundNetwork &net, const std::vector<TaskId> &children,
                                         const std::map<TaskId, TaskIdx> &label,
                                         const std::map<TaskId, Span> &span) {
  const std::size_t n = net.ids.size();
  if (children.size() != n)
    return std::nullopt;
  std::vector<TaskId> assigned(n);
  std::vector<bool> used(n, false);
  auto consistent = [&](std::size_t j, std::size_t k) {
    const Span &a = span.at(assigned[j]), &b = span.at(assigned[k]);
    if (a.empty() || b.empty())
      return true;
    if (net.precedes(net.ids[j], net.ids[k]) && !(a.hi < b.lo))
      return false;
    if (net.precedes(net.ids[k], net.ids[j]) && !(b.hi < a.lo))
      return false;
    return true;
  };
  auto search = [&](auto &self, std::size_t k, bool check_order) -> bool {
    if (k == n)
      return true;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c] || label.at(children[c]) != net.label(net.ids[k]))
        continue;
      assigned[k] = children[c];
      bool ok = true;
      for (std::size_t j = 0; j < k && ok && check_order; ++j)
        ok = consistent(j, k);
      if (!ok)
        continue;
      used[c] = true;
      if (self(self, k + 1, check_order))
        return true;
      used[c] = false;
    }
    return false;
  };
  if (search(search, 0, true))
    return assigned;
  std::fill(used.begin(), used.end(), false);
  if (search(search, 0, false))
    return assigned;
  return std::nullopt;
}

} // namespace

std::variant<Resolved, Verdict> resolve_witness(const GroundModel &g, const Witness &w) {
  Resolved r;
  std::map<TaskId, int> defined_at;
  std::map<TaskId, TaskIdx> label;
  std::map<TaskId, Span> span;
  auto define = [&](const TaskId &id, int line) -> std::optional<Verdict> {
    if (!defined_at.emplace(id, line).second)
      return Verdict::reject(Stage::Mapping, "id " + id + " is defined twice", line_of(line));
    return std::nullopt;
  };

  for (std::size_t k = 0; k < w.actions.size(); ++k) {
    const auto &a = w.actions[k];
    if (auto v = define(a.id, a.line))
      return *v;
    const std::string key = key_of(a.name, a.args);
    const auto t = g.find_task(key);
    if (!t || !g.tasks[*t].primitive)
      return Verdict::reject(Stage::Mapping, "unknown ground action " + key, line_of(a.line));
    r.plan.steps.push_back(a.id);
    r.tree.nodes[a.id] = TreeNode{*t, std::nullopt, {}};
    label[a.id] = *t;
    span[a.id] = Span{static_cast<int>(k), static_cast<int>(k)};
  }
  std::map<TaskId, const Witness::Node *> inner;
  for (const auto &n : w.nodes) {
    if (auto v = define(n.id, n.line))
      return *v;
    const std::string key = key_of(n.task, n.args);
    const auto t = g.find_task(key);
    if (!t || g.tasks[*t].primitive)
      return Verdict::reject(Stage::Mapping, "unknown compound task " + key, line_of(n.line));
    label[n.id] = *t;
    inner[n.id] = &n;
  }

  // Every id is referenced exactly once, by the root line or a parent.
  std::map<TaskId, TaskId> parent;
  auto reference = [&](const TaskId &child, const TaskId &from, int line) -> std::optional<Verdict> {
    if (!defined_at.count(child))
      return Verdict::reject(Stage::Mapping, "id " + child + " is referenced but not defined", line_of(line));
    if (!parent.emplace(child, from).second)
      return Verdict::reject(Stage::Mapping, "id " + child + " has more than one parent", line_of(line));
    return std::nullopt;
  };
  for (const auto &root : w.roots)
    if (auto v = reference(root, "root", w.root_line))
      return *v;
  for (const auto &n : w.nodes)
    for (const auto &c : n.children)
      if (auto v = reference(c, n.id, n.line))
        return *v;

  // Reachability from the roots rules out detached cycles; the post-order
  // also gives children before parents for the leaf spans.
  std::vector<TaskId> post;
  std::set<TaskId> seen;
  auto visit = [&](auto &self, const TaskId &id) -> void {
    if (!seen.insert(id).second)
      return;
    if (auto it = inner.find(id); it != inner.end())
      for (const auto &c : it->second->children)
        self(self, c);
    post.push_back(id);
  };
  for (const auto &root : w.roots)
    visit(visit, root);
  for (const auto &[id, line] : defined_at)
    if (!seen.count(id))
      return Verdict::reject(Stage::Mapping, "id " + id + " is not reachable from the root line", line_of(line));

  for (const auto &id : post) {
    auto it = inner.find(id);
    if (it == inner.end())
      continue;
    Span s;
    for (const auto &c : it->second->children) {
      const Span &cs = span[c];
      if (cs.empty())
        continue;
      s.lo = std::min(s.lo, cs.lo);
      s.hi = std::max(s.hi, cs.hi);
    }
    span[id] = s;
  }

  for (const auto &[id, n] : inner) {
    const TaskIdx t = label[id];
    bool named = false;
    std::optional<std::pair<MethodId, std::vector<TaskId>>> choice;
    for (MethodId m : g.tasks[t].methods) {
      if (g.methods[m].name != n->method)
        continue;
      named = true;
      if (auto aligned = align(g.methods[m].network, n->children, label, span)) {
        choice.emplace(m, std::move(*aligned));
        break;
      }
    }
    if (!named)
      return Verdict::reject(Stage::Method,
                             "no method " + n->method + " decomposes " + g.tasks[t].key, line_of(n->line));
    if (!choice)
      return Verdict::reject(Stage::Method,
                             "subtasks of " + id + " do not match any ground instance of " + n->method,
                             line_of(n->line));
    r.tree.nodes[id] = TreeNode{t, choice->first, std::move(choice->second)};
  }

  auto roots = align(g.initial_network, w.roots, label, span);
  if (!roots)
    return Verdict::reject(Stage::Method, "root tasks do not match the initial task network",
                           line_of(w.root_line));
  r.tree.roots = std::move(*roots);
  return r;
}

Verdict verify(const GroundModel &g, const Plan &plan, const DecompositionTree &tree) {
  const GroundNetwork &init = g.initial_network;
  if (tree.roots.size() != init.size())
    return Verdict::reject(Stage::Method, "root tasks do not match the initial task network");

  // tn_I with its ids renamed to the tree's root ids.
  GroundNetwork tn;
  std::map<TaskId, TaskId> root_of;
  for (std::size_t k = 0; k < init.ids.size(); ++k) {
    const TaskId &id = tree.roots[k];
    if (tn.contains(id))
      return Verdict::reject(Stage::Mapping, "root id " + id + " occurs twice");
    auto it = tree.nodes.find(id);
    if (it == tree.nodes.end())
      return Verdict::reject(Stage::Mapping, "no tree node for root " + id);
    if (it->second.task != init.label(init.ids[k]))
      return Verdict::reject(Stage::Method, "root " + id + " does not match initial task " + init.ids[k]);
    tn.add(id, init.label(init.ids[k]));
    root_of[init.ids[k]] = id;
  }
  for (const auto &[a, b] : init.order)
    tn.order.emplace(root_of.at(a), root_of.at(b));

  std::vector<TaskId> queue(tree.roots.begin(), tree.roots.end());
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const TaskId id = queue[q];
    auto it = tree.nodes.find(id);
    if (it == tree.nodes.end())
      return Verdict::reject(Stage::Mapping, "no tree node for id " + id);
    const TreeNode &node = it->second;
    const auto &task = g.tasks[node.task];
    if (task.primitive) {
      if (node.method)
        return Verdict::reject(Stage::Method, "primitive task " + task.key + " has a method", id);
      continue;
    }
    if (!node.method)
      return Verdict::reject(Stage::Mapping, "compound task " + task.key + " is not decomposed", id);
    const GroundMethod &gm = g.methods[*node.method];
    if (gm.task != node.task)
      return Verdict::reject(Stage::Method, gm.key + " does not decompose " + task.key, id);
    if (node.children.size() != gm.network.size())
      return Verdict::reject(Stage::Method, "wrong number of subtasks for " + gm.key, id);
    std::map<TaskId, TaskId> renaming;
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      const TaskId &c = node.children[k];
      auto ct = tree.nodes.find(c);
      if (ct == tree.nodes.end())
        return Verdict::reject(Stage::Mapping, "no tree node for id " + c);
      if (ct->second.task != gm.network.label(gm.network.ids[k]))
        return Verdict::reject(Stage::Method, "subtask " + c + " does not match " + gm.key, id);
      renaming[gm.network.ids[k]] = c;
    }
    try {
      tn = decompose_step(tn, id, gm, renaming);
    } catch (const DecompositionError &e) {
      return Verdict::reject(Stage::Mapping, e.what(), id);
    }
    queue.insert(queue.end(), node.children.begin(), node.children.end());
  }

  // Leaves of the replayed network against the plan.
  std::map<TaskId, int> pos;
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const TaskId &s = plan.steps[k];
    if (!tn.contains(s))
      return Verdict::reject(Stage::Mapping, "plan step " + s + " is not a leaf of the tree",
                             "step " + std::to_string(k));
    if (!pos.emplace(s, static_cast<int>(k)).second)
      return Verdict::reject(Stage::Mapping, "leaf " + s + " occurs twice in the plan",
                             "step " + std::to_string(k));
  }
  for (const auto &id : tn.ids)
    if (!pos.count(id))
      return Verdict::reject(Stage::Mapping, "leaf " + id + " is missing from the plan");

  const std::pair<TaskId, TaskId> *worst = nullptr;
  for (const auto &edge : tn.order)
    if (pos[edge.first] > pos[edge.second] && (!worst || pos[edge.second] < pos[worst->second]))
      worst = &edge;
  if (worst) {
    const int a = pos[worst->first], b = pos[worst->second];
    return Verdict::reject(Stage::Ordering,
                           "step " + std::to_string(b) + " (" + g.tasks[tn.label(worst->second)].key +
                               ") must come after step " + std::to_string(a) + " (" +
                               g.tasks[tn.label(worst->first)].key + ")",
                           "step " + std::to_string(b));
  }

  execution::State s = execution::initial_state(g);
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const auto &action = g.actions[g.tasks[tn.label(plan.steps[k])].action];
    if (auto lit = execution::first_failing_literal(s, action.precondition, g))
      return Verdict::reject(Stage::Executability, action.key + " is not applicable: " + *lit + " is false",
                             "step " + std::to_string(k));
    s = execution::apply_effects(s, action);
  }
  if (g.goal && !execution::holds(s, *g.goal))
    return Verdict::reject(Stage::Goal, "the final state does not satisfy the goal " + to_string(*g.goal, g));
  return Verdict::accept();
}

Verdict verify_witness(const GroundModel &g, const Witness &w) {
  auto r = resolve_witness(g, w);
  if (auto *v = std::get_if<Verdict>(&r))
    return *v;
  const auto &res = std::get<Resolved>(r);
  return verify(g, res.plan, res.tree);
}

} // namespace hddl::verification
