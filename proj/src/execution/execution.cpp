#include "hddl/execution/execution.hpp"

#include <functional>
#include <set>

namespace hddl::execution {

State State::from_atoms(std::size_t universe, const std::vector<AtomId> &atoms) {
  State s(universe);
  for (AtomId a : atoms)
    s.insert(a);
  return s;
}

std::vector<AtomId> State::atoms() const {
  std::vector<AtomId> out;
  for (std::size_t a = 0; a < universe_; ++a)
    if (contains(static_cast<AtomId>(a)))
      out.push_back(static_cast<AtomId>(a));
  return out;
}

std::size_t State::hash() const {
  std::size_t h = universe_;
  for (std::uint64_t w : words_)
    h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

State initial_state(const GroundModel &g) {
  return State::from_atoms(g.atoms.size(), g.initial_state);
}

bool holds(const State &s, const Condition &c) {
  switch (c.kind) {
  case Condition::Kind::True:
    return true;
  case Condition::Kind::False:
    return false;
  case Condition::Kind::Atom:
    return s.contains(c.atom);
  case Condition::Kind::Not:
    return !holds(s, c.children[0]);
  case Condition::Kind::And:
    for (const auto &child : c.children)
      if (!holds(s, child))
        return false;
    return true;
  case Condition::Kind::Or:
    for (const auto &child : c.children)
      if (holds(s, child))
        return true;
    return false;
  }
  return false;
}

namespace {

model::ConstId constant_of(const model::Term &t) {
  if (t.is_variable())
    throw std::logic_error("holds: free variable ?" + t.name);
  return t.constant;
}

} // namespace

bool holds(const State &s, const model::Formula &f, const GroundModel &g) {
  using K = model::Formula::Kind;
  switch (f.kind) {
  case K::True:
    return true;
  case K::False:
    return false;
  case K::Atom: {
    grounding::GroundAtom a{f.atom.predicate, {}};
    for (const auto &t : f.atom.args)
      a.args.push_back(constant_of(t));
    auto id = g.atoms.find(a);
    return id && s.contains(*id);
  }
  case K::Equals:
    return constant_of(f.terms[0]) == constant_of(f.terms[1]);
  case K::Not:
    return !holds(s, f.children[0], g);
  case K::And:
    for (const auto &c : f.children)
      if (!holds(s, c, g))
        return false;
    return true;
  case K::Or:
    for (const auto &c : f.children)
      if (holds(s, c, g))
        return true;
    return false;
  case K::Imply:
    return !holds(s, f.children[0], g) || holds(s, f.children[1], g);
  case K::Exists:
  case K::Forall: {
    const bool exists = f.kind == K::Exists;
    for (const auto &b : grounding::substitutions(f.bound, g.types())) {
      const auto inner =
          model::substitute(f.children[0], grounding::to_substitution(f.bound, b), g.types());
      if (holds(s, inner, g) == exists)
        return exists;
    }
    return !exists;
  }
  }
  return false;
}

std::optional<std::string> first_failing_literal(const State &s, const Condition &c,
                                                 const GroundModel &g) {
  if (c.kind == Condition::Kind::And) {
    for (const auto &child : c.children)
      if (auto lit = first_failing_literal(s, child, g))
        return lit;
    return std::nullopt;
  }
  if (holds(s, c))
    return std::nullopt;
  return grounding::to_string(c, g);
}

bool applicable(const State &s, const GroundAction &a) { return holds(s, a.precondition); }

State apply_effects(const State &s, const GroundAction &a) {
  State out = s;
  std::vector<const grounding::GroundConditional *> active;
  for (const auto &ce : a.conditional)
    if (holds(s, ce.condition))
      active.push_back(&ce);
  for (AtomId d : a.del)
    out.erase(d);
  for (const auto *ce : active)
    for (AtomId d : ce->del)
      out.erase(d);
  for (AtomId x : a.add)
    out.insert(x);
  for (const auto *ce : active)
    for (AtomId x : ce->add)
      out.insert(x);
  return out;
}

State apply(const State &s, const GroundAction &a, const GroundModel &g) {
  if (auto lit = first_failing_literal(s, a.precondition, g))
    throw PreconditionViolated(a.key, *lit);
  return apply_effects(s, a);
}

std::optional<Linearization> executable_linearization(const GroundModel &g, const GroundNetwork &net,
                                                      const State &s0) {
  const std::size_t n = net.ids.size();
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<const GroundAction *> action(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &task = g.tasks[net.label(net.ids[i])];
    if (!task.primitive)
      throw std::invalid_argument("executable_linearization: " + task.key + " is not primitive");
    action[i] = &g.actions[task.action];
    for (std::size_t j = 0; j < n; ++j)
      if (net.precedes(net.ids[j], net.ids[i]))
        preds[i].push_back(j);
  }

  std::vector<bool> done(n, false);
  std::vector<std::size_t> sequence;
  std::set<std::pair<std::vector<bool>, State>> failed;
  std::optional<State> final_state;

  std::function<bool(const State &)> search = [&](const State &s) {
    if (sequence.size() == n) {
      final_state = s;
      return true;
    }
    if (failed.count({done, s}))
      return false;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i])
        continue;
      bool ready = true;
      for (std::size_t p : preds[i])
        ready &= static_cast<bool>(done[p]);
      if (!ready || !applicable(s, *action[i]))
        continue;
      done[i] = true;
      sequence.push_back(i);
      if (search(apply_effects(s, *action[i])))
        return true;
      sequence.pop_back();
      done[i] = false;
    }
    failed.insert({done, s});
    return false;
  };

  if (!search(s0))
    return std::nullopt;
  Linearization out;
  for (std::size_t i : sequence)
    out.order.push_back(net.ids[i]);
  out.final_state = std::move(*final_state);
  return out;
}

} // namespace hddl::execution
