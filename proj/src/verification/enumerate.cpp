#include <algorithm>
#include <limits>
#include <numeric>

#include "hddl/verification/verify.hpp"

namespace hddl::verification {

namespace {

struct Partial {
  GroundNetwork tn;
  DecompositionTree tree;
};

class Enumerator {
public:
  Enumerator(const GroundModel &g, std::size_t max_depth, std::size_t max_len, std::size_t budget)
      : g_(g), max_depth_(max_depth), max_len_(max_len), budget_(budget) {
    // Fewest actions each task can expand into; kInf when it cannot be
    // made primitive at all.
    min_len_.assign(g.tasks.size(), kInf);
    for (std::size_t t = 0; t < g.tasks.size(); ++t)
      if (g.tasks[t].primitive &&
          g.actions[g.tasks[t].action].precondition.kind != grounding::Condition::Kind::False)
        min_len_[t] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto &m : g.methods) {
        std::size_t sum = 0;
        for (const auto &[_, t] : m.network.alpha)
          sum = std::min(kInf, sum + min_len_[t]);
        if (sum < min_len_[m.task]) {
          min_len_[m.task] = sum;
          changed = true;
        }
      }
    }
  }

  void run(EnumerationResult &out, std::vector<Partial> &primitive) {
    Partial root;
    root.tn = g_.initial_network;
    root.tree.roots = root.tn.ids;
    for (const auto &id : root.tn.ids)
      root.tree.nodes[id] = TreeNode{root.tn.label(id), std::nullopt, {}};
    expand(root, 0);
    out.complete = !exhausted_;
    out.nodes = nodes_;
    primitive = std::move(primitive_);
  }

private:
  const GroundModel &g_;
  std::size_t max_depth_, max_len_, budget_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
  std::vector<Partial> primitive_;
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::size_t> min_len_;

  void expand(const Partial &p, std::size_t depth) {
    if (exhausted_)
      return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    std::size_t len = 0, compounds = 0;
    const TaskId *compound = nullptr;
    for (const auto &id : p.tn.ids) {
      const TaskIdx t = p.tn.label(id);
      len = std::min(kInf, len + min_len_[t]);
      if (!g_.tasks[t].primitive && compounds++ == 0)
        compound = &id;
    }
    if (len > max_len_ || depth + compounds > max_depth_)
      return;
    if (!compound) {
      primitive_.push_back(p);
      return;
    }
    const TaskId id = *compound;
    for (MethodId m : g_.tasks[p.tn.label(id)].methods) {
      const GroundMethod &gm = g_.methods[m];
      std::map<TaskId, TaskId> renaming;
      std::vector<TaskId> children;
      for (const auto &x : gm.network.ids) {
        TaskId fresh = id + "." + x;
        while (p.tn.contains(fresh) || p.tree.nodes.count(fresh))
          fresh += "'";
        renaming[x] = fresh;
        children.push_back(fresh);
      }
      Partial q;
      q.tn = decompose_step(p.tn, id, gm, renaming);
      q.tree = p.tree;
      auto &node = q.tree.nodes[id];
      node.method = m;
      node.children = children;
      for (const auto &x : gm.network.ids)
        q.tree.nodes[renaming[x]] = TreeNode{gm.network.label(x), std::nullopt, {}};
      expand(q, depth + 1);
    }
  }
};

/// All executable linear extensions of a primitive network that reach the goal.
void linearizations(const GroundModel &g, const Partial &p, std::vector<Solution> &out) {
  const auto &tn = p.tn;
  const std::size_t n = tn.ids.size();
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (tn.precedes(tn.ids[a], tn.ids[b]))
        preds[b].push_back(a);
  std::vector<bool> done(n, false);
  std::vector<std::size_t> order;
  auto rec = [&](auto &self, const execution::State &s) -> void {
    if (order.size() == n) {
      if (g.goal && !execution::holds(s, *g.goal))
        return;
      Solution sol;
      for (auto k : order)
        sol.plan.steps.push_back(tn.ids[k]);
      sol.tree = p.tree;
      out.push_back(std::move(sol));
      return;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k] || std::any_of(preds[k].begin(), preds[k].end(), [&](auto j) { return !done[j]; }))
        continue;
      const auto &a = g.actions[g.tasks[tn.label(tn.ids[k])].action];
      if (!execution::applicable(s, a))
        continue;
      done[k] = true;
      order.push_back(k);
      self(self, execution::apply_effects(s, a));
      order.pop_back();
      done[k] = false;
    }
  };
  rec(rec, execution::initial_state(g));
}

} // namespace

EnumerationResult enumerate_solutions(const GroundModel &g, std::size_t max_depth, std::size_t max_len,
                                      std::size_t node_budget, bool parallel) {
  EnumerationResult result;
  std::vector<Partial> primitive;
  Enumerator(g, max_depth, max_len, node_budget).run(result, primitive);

  const int n = static_cast<int>(primitive.size());
  std::vector<std::vector<Solution>> parts(n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i)
      linearizations(g, primitive[i], parts[i]);
  } else {
    for (int i = 0; i < n; ++i)
      linearizations(g, primitive[i], parts[i]);
  }

  std::vector<std::pair<std::string, Solution>> keyed;
  for (auto &part : parts)
    for (auto &sol : part) {
      std::string text = write_witness(g, sol.plan, sol.tree);
      keyed.emplace_back(std::move(text), std::move(sol));
    }
  std::sort(keyed.begin(), keyed.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto &a, const auto &b) { return a.first == b.first; }),
              keyed.end());
  for (auto &[_, sol] : keyed)
    result.solutions.push_back(std::move(sol));
  return result;
}

} // namespace hddl::verification
