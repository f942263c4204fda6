#include "hddl/model/model.hpp"

#include <algorithm>

namespace hddl::model {

namespace {

template <class T> const T *find_named(const std::vector<T> &items, std::string_view name) {
  for (const auto &item : items)
    if (item.name == name)
      return &item;
  return nullptr;
}

} // namespace

const PredicateDecl *Model::find_predicate(std::string_view name) const {
  return find_named(predicates, name);
}
const ActionSchema *Model::find_action(std::string_view name) const {
  return find_named(actions, name);
}
const CompoundTaskSchema *Model::find_compound_task(std::string_view name) const {
  return find_named(compound_tasks, name);
}
const MethodSchema *Model::find_method(std::string_view name) const {
  return find_named(methods, name);
}

std::vector<const MethodSchema *> Model::methods_for(std::string_view task) const {
  std::vector<const MethodSchema *> out;
  for (const auto &m : methods)
    if (m.task.name == task)
      out.push_back(&m);
  return out;
}

bool Model::has_method_preconditions() const {
  return std::any_of(methods.begin(), methods.end(),
                     [](const MethodSchema &m) { return m.precondition.has_value(); });
}

Model compile_method_preconditions(Model model) {
  for (auto &m : model.methods) {
    if (!m.precondition)
      continue;
    std::string name = "__prec_" + m.name;
    while (model.find_action(name) || model.find_compound_task(name))
      name += "_";

    const std::set<std::string> free = free_variables(*m.precondition);
    ActionSchema a;
    a.name = name;
    a.precondition = std::move(*m.precondition);
    a.synthetic = true;
    TaskInstance label{name, {}};
    for (const auto &p : m.parameters)
      if (free.count(p.name)) {
        a.parameters.push_back(p);
        label.args.push_back(Term::variable(p.name));
      }
    m.precondition.reset();

    TaskId id = "__prec";
    while (m.network.contains(id))
      id += "_";
    for (const auto &other : m.network.ids)
      m.network.order.emplace(id, other);
    m.network.ids.insert(m.network.ids.begin(), id);
    m.network.alpha.emplace(id, std::move(label));
    model.actions.push_back(std::move(a));
  }
  return model;
}

std::string to_string(const TaskInstance &t) {
  std::string out = "(" + t.name;
  for (const auto &a : t.args)
    out += " " + to_string(a);
  return out + ")";
}

} // namespace hddl::model
