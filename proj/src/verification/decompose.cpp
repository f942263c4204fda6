#include <set>

#include "hddl/verification/verify.hpp"

namespace hddl::verification {

GroundNetwork decompose_step(const GroundNetwork &tn1, const TaskId &i, const GroundMethod &gm,
                             const std::map<TaskId, TaskId> &renaming) {
  if (!tn1.contains(i))
    throw DecompositionError("task id " + i + " is not in the network");
  if (tn1.label(i) != gm.task)
    throw DecompositionError("method " + gm.key + " does not decompose the task of " + i);
  std::set<TaskId> fresh;
  for (const auto &x : gm.network.ids) {
    auto it = renaming.find(x);
    if (it == renaming.end())
      throw DecompositionError("no fresh id for method task " + x);
    if ((it->second != i && tn1.contains(it->second)) || !fresh.insert(it->second).second)
      throw DecompositionError("id " + it->second + " is not fresh");
  }

  GroundNetwork tn2;
  for (const auto &id : tn1.ids) {
    if (id != i) {
      tn2.add(id, tn1.label(id));
      continue;
    }
    for (const auto &x : gm.network.ids)
      tn2.add(renaming.at(x), gm.network.label(x));
  }
  for (const auto &[a, b] : tn1.order) {
    if (a != i && b != i) {
      tn2.order.emplace(a, b);
    } else if (b == i) {
      for (const auto &x : gm.network.ids)
        tn2.order.emplace(a, renaming.at(x));
    } else {
      for (const auto &x : gm.network.ids)
        tn2.order.emplace(renaming.at(x), b);
    }
  }
  for (const auto &[a, b] : gm.network.order)
    tn2.order.emplace(renaming.at(a), renaming.at(b));
  tn2.constraints = tn1.constraints;
  return tn2;
}

GroundNetwork decompose_step(const GroundNetwork &tn1, const TaskId &i, const GroundMethod &gm) {
  std::map<TaskId, TaskId> renaming;
  for (const auto &x : gm.network.ids) {
    TaskId id = i + "." + x;
    while (tn1.contains(id) && id != i)
      id += "'";
    renaming[x] = id;
  }
  return decompose_step(tn1, i, gm, renaming);
}

} // namespace hddl::verification
