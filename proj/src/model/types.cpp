#include "hddl/model/types.hpp"

#include <algorithm>
#include <functional>

namespace hddl::model {

TypeHierarchy::TypeHierarchy() { add_type("object"); }

TypeId TypeHierarchy::add_type(const std::string &name) {
  if (auto it = type_index_.find(name); it != type_index_.end())
    return it->second;
  const TypeId id = static_cast<TypeId>(type_names_.size());
  type_names_.push_back(name);
  parents_.emplace_back();
  type_index_.emplace(name, id);
  return id;
}

void TypeHierarchy::add_parent(TypeId child, TypeId parent) {
  auto &ps = parents_[child];
  if (std::find(ps.begin(), ps.end(), parent) == ps.end())
    ps.push_back(parent);
}

std::optional<TypeId> TypeHierarchy::find_type(std::string_view name) const {
  if (auto it = type_index_.find(std::string(name)); it != type_index_.end())
    return it->second;
  return std::nullopt;
}

ConstId TypeHierarchy::add_constant(const std::string &name) {
  if (auto it = constant_index_.find(name); it != constant_index_.end())
    return it->second;
  const ConstId id = static_cast<ConstId>(constant_names_.size());
  constant_names_.push_back(name);
  constant_types_.emplace_back();
  constant_index_.emplace(name, id);
  return id;
}

bool TypeHierarchy::add_constant_type(ConstId c, TypeId t) {
  auto &ts = constant_types_[c];
  if (std::find(ts.begin(), ts.end(), t) != ts.end())
    return false;
  ts.push_back(t);
  return true;
}

std::optional<ConstId> TypeHierarchy::find_constant(std::string_view name) const {
  if (auto it = constant_index_.find(std::string(name)); it != constant_index_.end())
    return it->second;
  return std::nullopt;
}

std::optional<std::vector<TypeId>> TypeHierarchy::find_cycle() const {
  const std::size_t n = type_names_.size();
  std::vector<int> colour(n, 0); // 0 new, 1 on stack, 2 done
  std::vector<TypeId> stack;
  std::optional<std::vector<TypeId>> cycle;
  std::function<void(TypeId)> visit = [&](TypeId t) {
    colour[t] = 1;
    stack.push_back(t);
    for (TypeId p : parents_[t]) {
      if (cycle)
        return;
      if (colour[p] == 1) {
        auto from = std::find(stack.begin(), stack.end(), p);
        cycle = std::vector<TypeId>(from, stack.end());
        return;
      }
      if (colour[p] == 0)
        visit(p);
    }
    stack.pop_back();
    colour[t] = 2;
  };
  for (TypeId t = 0; t < static_cast<TypeId>(n) && !cycle; ++t)
    if (colour[t] == 0)
      visit(t);
  return cycle;
}

void TypeHierarchy::finalize() {
  const std::size_t n = type_names_.size();
  subtype_.assign(n, std::vector<bool>(n, false));
  for (TypeId t = 0; t < static_cast<TypeId>(n); ++t) {
    std::vector<TypeId> todo{t};
    while (!todo.empty()) {
      const TypeId u = todo.back();
      todo.pop_back();
      if (subtype_[t][u])
        continue;
      subtype_[t][u] = true;
      for (TypeId p : parents_[u])
        todo.push_back(p);
    }
    subtype_[t][kObject] = true;
  }
  members_.assign(n, {});
  for (ConstId c = 0; c < static_cast<ConstId>(constant_names_.size()); ++c)
    for (TypeId t = 0; t < static_cast<TypeId>(n); ++t)
      if (has_type(c, t))
        members_[t].push_back(c);
}

bool TypeHierarchy::is_subtype(TypeId sub, TypeId super) const {
  return subtype_[sub][super];
}

bool TypeHierarchy::has_type(ConstId c, TypeId t) const {
  for (TypeId d : constant_types_[c])
    if (subtype_[d][t])
      return true;
  return false;
}

} // namespace hddl::model
