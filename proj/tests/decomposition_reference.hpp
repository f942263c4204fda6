#pragma once

#include <set>

#include "hddl/verification/verify.hpp"

namespace hddl_test {

using hddl::grounding::GroundMethod;
using hddl::grounding::GroundNetwork;
using hddl::model::TaskId;

// Task decomposition written out with set algebra over (id, label) pairs.
inline GroundNetwork reference_step(const GroundNetwork &tn, const TaskId &i, const GroundMethod &gm,
                             const std::map<TaskId, TaskId> &ren) {
  std::set<TaskId> im;
  for (const auto &x : gm.network.ids)
    im.insert(ren.at(x));
  GroundNetwork out;
  for (const auto &id : tn.ids)
    if (id != i)
      out.add(id, tn.label(id));
  for (const auto &x : gm.network.ids)
    out.add(ren.at(x), gm.network.label(x));
  for (const auto &[a, b] : tn.order)
    if (a != i && b != i)
      out.order.emplace(a, b);
  for (const auto &[a, b] : gm.network.order)
    out.order.emplace(ren.at(a), ren.at(b));
  for (const auto &[a, b] : tn.order) {
    if (b == i)
      for (const auto &m : im)
        out.order.emplace(a, m);
    if (a == i)
      for (const auto &m : im)
        out.order.emplace(m, b);
  }
  return out;
}


} // namespace hddl_test
