#include "hddl/planner/planner.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hddl::planner {

using execution::State;
using grounding::Condition;
using grounding::GroundNetwork;
using grounding::TaskIdx;
using model::TaskId;
using verification::Solution;

namespace {

bool relaxed_holds(const Condition &c, const std::vector<bool> &reached) {
  switch (c.kind) {
  case Condition::Kind::True:
  case Condition::Kind::Not:
    return true;
  case Condition::Kind::False:
    return false;
  case Condition::Kind::Atom:
    return reached[c.atom];
  case Condition::Kind::And:
    return std::all_of(c.children.begin(), c.children.end(),
                       [&](const Condition &x) { return relaxed_holds(x, reached); });
  case Condition::Kind::Or:
    return std::any_of(c.children.begin(), c.children.end(),
                       [&](const Condition &x) { return relaxed_holds(x, reached); });
  }
  return true;
}

std::vector<bool> relaxed_reachable(const GroundModel &g) {
  std::vector<bool> reached(g.atoms.size(), false);
  for (auto a : g.initial_state)
    reached[a] = true;
  for (bool changed = true; changed;) {
    changed = false;
    auto add = [&](const std::vector<grounding::AtomId> &atoms) {
      for (auto x : atoms)
        if (!reached[x])
          reached[x] = changed = true;
    };
    for (const auto &a : g.actions) {
      if (!relaxed_holds(a.precondition, reached))
        continue;
      add(a.add);
      for (const auto &ce : a.conditional)
        if (relaxed_holds(ce.condition, reached))
          add(ce.add);
    }
  }
  return reached;
}

class Search {
public:
  Search(const GroundModel &g, const SearchLimits &lim)
      : g_(g), lim_(lim), min_len_(minimum_lengths(g)), start_(std::chrono::steady_clock::now()) {
    for (const auto &id : g.initial_network.ids)
      initial_ids_.insert(id);
  }

  PlanResult run() {
    PlanResult r;
    if (std::any_of(g_.initial_network.ids.begin(), g_.initial_network.ids.end(),
                    [&](const TaskId &id) { return min_len_[g_.initial_network.label(id)] == kUnbounded; }) ||
        (g_.goal && !relaxed_holds(*g_.goal, relaxed_reachable(g_)))) {
      stats_.nodes_expanded = 1;
      stats_.dead_ends_pruned = 1;
      return finish(Outcome::ProvenUnsolvable, "proven unsolvable");
    }
    for (std::size_t bound = 1;; ++bound) {
      ++stats_.iterations;
      bound_dec_ = std::min(bound, lim_.max_decompositions);
      bound_len_ = std::min(bound, lim_.max_plan_length);
      bound_cut_ = limit_cut_ = false;
      visited_.clear();
      reset();
      if (dfs(execution::initial_state(g_), 0, 0)) {
        r = finish(Outcome::Solved, "");
        r.solution = Solution{plan_, tree_};
        return r;
      }
      if (aborted_)
        return finish(Outcome::UnsolvableWithinLimits, abort_reason_);
      if (!bound_cut_ && !limit_cut_)
        return finish(Outcome::ProvenUnsolvable, "proven unsolvable");
      if (!bound_cut_)
        return finish(Outcome::UnsolvableWithinLimits, "search limits");
    }
  }

private:
  const GroundModel &g_;
  const SearchLimits &lim_;
  std::vector<std::size_t> min_len_;
  std::chrono::steady_clock::time_point start_;
  std::set<TaskId> initial_ids_;
  SearchStats stats_;

  std::size_t bound_dec_ = 0, bound_len_ = 0;
  bool bound_cut_ = false, limit_cut_ = false, aborted_ = false;
  std::string abort_reason_;
  std::size_t next_id_ = 0;

  GroundNetwork tn_;
  verification::Plan plan_;
  verification::DecompositionTree tree_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> visited_;

  PlanResult finish(Outcome o, std::string reason) {
    PlanResult r;
    r.outcome = o;
    r.reason = std::move(reason);
    stats_.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    r.stats = stats_;
    return r;
  }

  void reset() {
    tn_ = g_.initial_network;
    plan_ = {};
    tree_ = {};
    tree_.roots = tn_.ids;
    for (const auto &id : tn_.ids)
      tree_.nodes[id] = verification::TreeNode{tn_.label(id), std::nullopt, {}};
  }

  TaskId fresh() {
    TaskId id;
    do
      id = "n" + std::to_string(next_id_++);
    while (initial_ids_.count(id));
    return id;
  }

  void cut(bool by_limit) { (by_limit ? limit_cut_ : bound_cut_) = true; }

  /// State atoms plus the network with ids replaced by rank: ids are sorted
  /// by (longest predecessor chain, task index, insertion position).
  std::string canonical(const State &s) const {
    const std::size_t n = tn_.ids.size();
    std::map<TaskId, std::size_t> index;
    for (std::size_t k = 0; k < n; ++k)
      index[tn_.ids[k]] = k;
    std::vector<std::size_t> level(n, 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto &[a, b] : tn_.order) {
        const auto ia = index[a], ib = index[b];
        if (level[ib] < level[ia] + 1) {
          level[ib] = level[ia] + 1;
          changed = true;
        }
      }
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t k = 0; k < n; ++k)
      perm[k] = k;
    std::sort(perm.begin(), perm.end(), [&](auto x, auto y) {
      return std::tuple(level[x], tn_.label(tn_.ids[x]), x) < std::tuple(level[y], tn_.label(tn_.ids[y]), y);
    });
    std::vector<std::size_t> rank(n);
    for (std::size_t k = 0; k < n; ++k)
      rank[perm[k]] = k;
    std::ostringstream out;
    for (auto a : s.atoms())
      out << a << ',';
    out << '|';
    for (auto k : perm)
      out << tn_.label(tn_.ids[k]) << ',';
    out << '|';
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto &[a, b] : tn_.order)
      edges.emplace_back(rank[index[a]], rank[index[b]]);
    std::sort(edges.begin(), edges.end());
    for (const auto &[a, b] : edges)
      out << a << '<' << b << ',';
    return out.str();
  }

  bool out_of_budget() {
    if (stats_.nodes_expanded >= lim_.node_budget) {
      abort_reason_ = "node budget exhausted";
    } else if ((stats_.nodes_expanded & 255) == 0 &&
               std::chrono::steady_clock::now() - start_ > lim_.time_budget) {
      abort_reason_ = "time budget exhausted";
    } else {
      return false;
    }
    aborted_ = stats_.budget_hit = true;
    return true;
  }

  bool dfs(const State &s, std::size_t decompositions, std::size_t depth) {
    if (out_of_budget())
      return false;
    ++stats_.nodes_expanded;
    stats_.max_depth = std::max(stats_.max_depth, depth);

    if (tn_.empty())
      return !g_.goal || execution::holds(s, *g_.goal);

    std::size_t len = plan_.steps.size(), compounds = 0;
    for (const auto &id : tn_.ids) {
      const TaskIdx t = tn_.label(id);
      if (min_len_[t] == kUnbounded) {
        ++stats_.dead_ends_pruned;
        return false;
      }
      len += min_len_[t];
      compounds += !g_.tasks[t].primitive;
    }
    if (len > bound_len_) {
      cut(bound_len_ == lim_.max_plan_length);
      return false;
    }
    if (decompositions + compounds > bound_dec_) {
      cut(bound_dec_ == lim_.max_decompositions);
      return false;
    }

    if (lim_.duplicate_detection) {
      const std::pair rem{bound_dec_ - decompositions, bound_len_ - plan_.steps.size()};
      auto [it, inserted] = visited_.try_emplace(canonical(s), rem);
      if (!inserted) {
        if (it->second.first >= rem.first && it->second.second >= rem.second) {
          ++stats_.duplicates_pruned;
          return false;
        }
        it->second = rem;
      }
    }

    const auto minimal = tn_.minimal();
    for (const auto &id : minimal) {
      if (g_.tasks[tn_.label(id)].primitive)
        continue;
      return decompose(s, id, decompositions, depth);
    }
    for (const auto &id : minimal)
      if (progress(s, id, decompositions, depth))
        return true;
    return false;
  }

  bool decompose(const State &s, const TaskId &id, std::size_t decompositions, std::size_t depth) {
    const GroundNetwork saved = tn_;
    for (auto m : g_.tasks[tn_.label(id)].methods) {
      const auto &gm = g_.methods[m];
      std::map<TaskId, TaskId> renaming;
      std::vector<TaskId> children;
      for (const auto &x : gm.network.ids) {
        children.push_back(fresh());
        renaming[x] = children.back();
      }
      tn_ = verification::decompose_step(saved, id, gm, renaming);
      auto &node = tree_.nodes[id];
      node.method = m;
      node.children = children;
      for (const auto &x : gm.network.ids)
        tree_.nodes[renaming[x]] = verification::TreeNode{gm.network.label(x), std::nullopt, {}};
      if (dfs(s, decompositions + 1, depth + 1))
        return true;
      for (const auto &c : children)
        tree_.nodes.erase(c);
      auto &undo = tree_.nodes[id];
      undo.method.reset();
      undo.children.clear();
      if (aborted_)
        break;
    }
    tn_ = saved;
    return false;
  }

  bool progress(const State &s, const TaskId &id, std::size_t decompositions, std::size_t depth) {
    const auto &action = g_.actions[g_.tasks[tn_.label(id)].action];
    if (!execution::applicable(s, action))
      return false;
    const GroundNetwork saved = tn_;
    GroundNetwork rest;
    for (const auto &x : saved.ids)
      if (x != id)
        rest.add(x, saved.label(x));
    for (const auto &[a, b] : saved.order)
      if (a != id)
        rest.order.emplace(a, b);
    tn_ = std::move(rest);
    plan_.steps.push_back(id);
    if (dfs(execution::apply_effects(s, action), decompositions, depth + 1))
      return true;
    plan_.steps.pop_back();
    tn_ = saved;
    return false;
  }
};

} // namespace

std::vector<std::size_t> minimum_lengths(const GroundModel &g) {
  const auto reached = relaxed_reachable(g);
  std::vector<std::size_t> len(g.tasks.size(), kUnbounded);
  for (std::size_t t = 0; t < g.tasks.size(); ++t)
    if (g.tasks[t].primitive && relaxed_holds(g.actions[g.tasks[t].action].precondition, reached))
      len[t] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &m : g.methods) {
      std::size_t sum = 0;
      for (const auto &[_, t] : m.network.alpha) {
        if (len[t] == kUnbounded) {
          sum = kUnbounded;
          break;
        }
        sum += len[t];
      }
      if (sum < len[m.task]) {
        len[m.task] = sum;
        changed = true;
      }
    }
  }
  return len;
}

PlanResult plan(const GroundModel &g, const SearchLimits &limits) {
  PlanResult r = Search(g, limits).run();
  if (r.solution && !verification::verify(g, r.solution->plan, r.solution->tree).accepted)
    throw std::logic_error("planner produced a plan the verifier rejects");
  return r;
}

std::string to_string(const SearchStats &s) {
  std::ostringstream out;
  out << "nodes_expanded=" << s.nodes_expanded << '\n'
      << "duplicates_pruned=" << s.duplicates_pruned << '\n'
      << "dead_ends_pruned=" << s.dead_ends_pruned << '\n'
      << "max_depth=" << s.max_depth << '\n'
      << "iterations=" << s.iterations << '\n'
      << "elapsed_ms=" << s.elapsed_ms << '\n'
      << "budget_hit=" << (s.budget_hit ? "true" : "false") << '\n';
  return out.str();
}

const char *to_string(Outcome o) {
  switch (o) {
  case Outcome::Solved:
    return "solved";
  case Outcome::UnsolvableWithinLimits:
    return "unsolvable within limits";
  case Outcome::ProvenUnsolvable:
    return "proven unsolvable";
  }
  return "?";
}

} // namespace hddl::planner
