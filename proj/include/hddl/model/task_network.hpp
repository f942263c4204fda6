#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hddl/model/formula.hpp"

namespace hddl::model {

using TaskId = std::string;
using OrderRelation = std::set<std::pair<TaskId, TaskId>>;

/// Task network (I, ≺, α, VC), used lifted (Label = TaskInstance)
/// and ground (Label = ground task index). `order` is kept transitively
/// closed; `ids` records insertion order for deterministic output.
template <class Label> struct TaskNetwork {
  std::vector<TaskId> ids;
  std::map<TaskId, Label> alpha;
  OrderRelation order;
  std::vector<VariableConstraint> constraints;

  void add(const TaskId &id, Label label) {
    ids.push_back(id);
    alpha.emplace(id, std::move(label));
  }
  bool contains(const TaskId &id) const { return alpha.count(id) > 0; }
  const Label &label(const TaskId &id) const { return alpha.at(id); }
  bool precedes(const TaskId &a, const TaskId &b) const { return order.count({a, b}) > 0; }
  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }

  /// Ids with no predecessor, in insertion order.
  std::vector<TaskId> minimal() const {
    std::set<TaskId> has_pred;
    for (const auto &[a, b] : order)
      has_pred.insert(b);
    std::vector<TaskId> out;
    for (const auto &id : ids)
      if (!has_pred.count(id))
        out.push_back(id);
    return out;
  }

  friend bool operator==(const TaskNetwork &, const TaskNetwork &) = default;
};

/// Smallest transitive relation containing `r`.
inline OrderRelation transitive_closure(const OrderRelation &r) {
  std::map<TaskId, std::set<TaskId>> succ;
  for (const auto &[a, b] : r)
    succ[a].insert(b);
  OrderRelation out;
  for (const auto &[start, _] : succ) {
    std::vector<TaskId> todo(succ[start].begin(), succ[start].end());
    std::set<TaskId> seen;
    while (!todo.empty()) {
      TaskId u = todo.back();
      todo.pop_back();
      if (!seen.insert(u).second)
        continue;
      out.emplace(start, u);
      if (auto it = succ.find(u); it != succ.end())
        todo.insert(todo.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

/// Irreflexive, transitive, and only over `ids`.
inline bool is_strict_partial_order(const std::vector<TaskId> &ids, const OrderRelation &r) {
  const std::set<TaskId> known(ids.begin(), ids.end());
  for (const auto &[a, b] : r) {
    if (a == b || !known.count(a) || !known.count(b))
      return false;
  }
  return transitive_closure(r) == r;
}

/// Replaces the order by the total order of `ids` as listed.
template <class Label> TaskNetwork<Label> total_order_expand(TaskNetwork<Label> net) {
  net.order.clear();
  for (std::size_t j = 0; j < net.ids.size(); ++j)
    for (std::size_t k = j + 1; k < net.ids.size(); ++k)
      net.order.emplace(net.ids[j], net.ids[k]);
  return net;
}

} // namespace hddl::model
