#include "hddl/syntax/emitter.hpp"

#include <sstream>

namespace hddl::syntax {

namespace {

std::string term(const AstTerm &t) { return t.is_variable ? "?" + t.name : t.name; }

std::string terms(const std::vector<AstTerm> &ts) {
  std::string out;
  for (const auto &t : ts)
    out += " " + term(t);
  return out;
}

std::string type(const AstType &t) {
  if (!t.either)
    return t.names.front();
  std::string out = "(either";
  for (const auto &n : t.names)
    out += " " + n;
  return out + ")";
}

std::string atom(const AstAtom &a) { return "(" + a.predicate + terms(a.args) + ")"; }

std::string task_ref(const std::string &name, const std::vector<AstTerm> &args) {
  return "(" + name + terms(args) + ")";
}

std::string subtask(const AstSubtask &s) {
  const std::string body = task_ref(s.task, s.args);
  return s.id ? "(" + *s.id + " " + body + ")" : body;
}

std::string constraint(const AstConstraint &c) {
  const std::string eq = "(= " + term(c.lhs) + " " + term(c.rhs) + ")";
  return c.negated ? "(not " + eq + ")" : eq;
}

/// Writes `(and\n  item\n  item)` or `()`; lists are always wrapped in
/// `and` so that single elements reparse to the same one-element list.
template <class T, class F>
void block_list(std::ostringstream &os, const std::vector<T> &items, F render,
                const std::string &indent) {
  if (items.empty()) {
    os << "()";
    return;
  }
  os << "(and";
  for (const auto &item : items)
    os << "\n" << indent << render(item);
  os << ")";
}

void network(std::ostringstream &os, const AstTaskNetwork &net,
             const std::string &indent) {
  const std::string inner = indent + "  ";
  os << "\n" << indent << ":";
  if (net.totally_ordered)
    os << "ordered-";
  os << (net.keyword == AstTaskNetwork::Keyword::Subtasks ? "subtasks " : "tasks ");
  block_list(os, net.subtasks, subtask, inner);
  if (!net.orderings.empty()) {
    os << "\n" << indent << ":ordering ";
    block_list(
        os, net.orderings,
        [](const AstOrdering &o) { return "(" + o.before + " < " + o.after + ")"; },
        inner);
  }
  if (!net.constraints.empty()) {
    os << "\n" << indent << ":constraints ";
    block_list(os, net.constraints, constraint, inner);
  }
}

void requirements(std::ostringstream &os, const std::vector<std::string> &reqs) {
  if (reqs.empty())
    return;
  os << "\n  (:requirements";
  for (const auto &r : reqs)
    os << " :" << r;
  os << ")";
}

} // namespace

std::string emit(const AstTypedList &list) {
  // Consecutive elements with the same type share one `- type` suffix.
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i > 0)
      out += " ";
    out += list[i].is_variable ? "?" + list[i].name : list[i].name;
    const bool last_of_group = i + 1 == list.size() || list[i + 1].type != list[i].type;
    if (last_of_group && list[i].type)
      out += " - " + type(*list[i].type);
  }
  return out;
}

std::string emit(const AstGd &g) {
  switch (g.kind) {
  case AstGd::Kind::Empty:
    return "()";
  case AstGd::Kind::Atom:
    return atom(g.atom);
  case AstGd::Kind::Equals:
    return "(= " + term(g.terms[0]) + " " + term(g.terms[1]) + ")";
  case AstGd::Kind::Not:
    return "(not " + emit(g.children[0]) + ")";
  case AstGd::Kind::And:
  case AstGd::Kind::Or: {
    std::string out = g.kind == AstGd::Kind::And ? "(and" : "(or";
    for (const auto &c : g.children)
      out += " " + emit(c);
    return out + ")";
  }
  case AstGd::Kind::Imply:
    return "(imply " + emit(g.children[0]) + " " + emit(g.children[1]) + ")";
  case AstGd::Kind::Exists:
  case AstGd::Kind::Forall:
    return std::string(g.kind == AstGd::Kind::Exists ? "(exists (" : "(forall (") +
           emit(g.variables) + ") " + emit(g.children[0]) + ")";
  }
  return "()";
}

std::string emit(const AstEffect &e) {
  switch (e.kind) {
  case AstEffect::Kind::Empty:
    return "()";
  case AstEffect::Kind::Add:
    return atom(e.atom);
  case AstEffect::Kind::Delete:
    return "(not " + atom(e.atom) + ")";
  case AstEffect::Kind::And: {
    std::string out = "(and";
    for (const auto &c : e.children)
      out += " " + emit(c);
    return out + ")";
  }
  case AstEffect::Kind::Forall:
    return "(forall (" + emit(e.variables) + ") " + emit(e.children[0]) + ")";
  case AstEffect::Kind::When:
    return "(when " + emit(*e.condition) + " " + emit(e.children[0]) + ")";
  }
  return "()";
}

std::string emit(const AstDomain &d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")";
  requirements(os, d.requirements);
  if (!d.types.empty())
    os << "\n  (:types " << emit(d.types) << ")";
  if (!d.constants.empty())
    os << "\n  (:constants " << emit(d.constants) << ")";
  if (!d.predicates.empty()) {
    os << "\n  (:predicates";
    for (const auto &p : d.predicates) {
      os << "\n    (" << p.name;
      if (!p.parameters.empty())
        os << " " << emit(p.parameters);
      os << ")";
    }
    os << ")";
  }
  for (const auto &t : d.tasks)
    os << "\n\n  (:task " << t.name << " :parameters (" << emit(t.parameters) << "))";
  for (const auto &m : d.methods) {
    os << "\n\n  (:method " << m.name;
    os << "\n    :parameters (" << emit(m.parameters) << ")";
    os << "\n    :task " << task_ref(m.task.name, m.task.args);
    if (m.precondition)
      os << "\n    :precondition " << emit(*m.precondition);
    network(os, m.network, "    ");
    os << ")";
  }
  for (const auto &a : d.actions) {
    os << "\n\n  (:action " << a.name;
    os << "\n    :parameters (" << emit(a.parameters) << ")";
    if (a.precondition)
      os << "\n    :precondition " << emit(*a.precondition);
    if (a.effect)
      os << "\n    :effect " << emit(*a.effect);
    os << ")";
  }
  os << "\n)";
  return os.str();
}

std::string emit(const AstProblem &p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")";
  os << "\n  (:domain " << p.domain_name << ")";
  requirements(os, p.requirements);
  if (!p.objects.empty())
    os << "\n  (:objects " << emit(p.objects) << ")";
  if (p.htn) {
    os << "\n  (:" << p.htn->problem_class;
    if (p.htn->parameters)
      os << "\n    :parameters (" << emit(*p.htn->parameters) << ")";
    network(os, p.htn->network, "    ");
    os << ")";
  }
  os << "\n  (:init";
  for (const auto &lit : p.init)
    os << "\n    " << (lit.positive ? atom(lit.atom) : "(not " + atom(lit.atom) + ")");
  os << ")";
  if (p.goal)
    os << "\n  (:goal " << emit(*p.goal) << ")";
  os << "\n)";
  return os.str();
}

} // namespace hddl::syntax
