#include "hddl/grounding/ground.hpp"

#include <algorithm>
#include <set>

namespace hddl::grounding {

using model::Formula;
using model::Model;
using model::Substitution;
using model::TypedVariable;

// ---- atoms and conditions ---------------------------------------------

AtomId AtomTable::intern(const GroundAtom &a) {
  auto [it, inserted] = index_.emplace(a, static_cast<AtomId>(atoms_.size()));
  if (inserted)
    atoms_.push_back(a);
  return it->second;
}

std::optional<AtomId> AtomTable::find(const GroundAtom &a) const {
  if (auto it = index_.find(a); it != index_.end())
    return it->second;
  return std::nullopt;
}

std::string AtomTable::to_string(AtomId id, const model::TypeHierarchy &h) const {
  const GroundAtom &a = atoms_[id];
  std::string out = "(" + a.predicate;
  for (ConstId c : a.args)
    out += " " + h.constant_name(c);
  return out + ")";
}

Condition Condition::negation(Condition c) {
  switch (c.kind) {
  case Kind::True:
    return falsity();
  case Kind::False:
    return truth();
  case Kind::Not:
    return std::move(c.children[0]);
  default:
    return {Kind::Not, -1, {std::move(c)}};
  }
}

Condition Condition::conjunction(std::vector<Condition> cs) {
  std::vector<Condition> kept;
  for (auto &c : cs) {
    if (c.kind == Kind::False)
      return falsity();
    if (c.kind == Kind::True)
      continue;
    if (c.kind == Kind::And)
      for (auto &g : c.children)
        kept.push_back(std::move(g));
    else
      kept.push_back(std::move(c));
  }
  if (kept.empty())
    return truth();
  if (kept.size() == 1)
    return std::move(kept[0]);
  return {Kind::And, -1, std::move(kept)};
}

Condition Condition::disjunction(std::vector<Condition> cs) {
  std::vector<Condition> kept;
  for (auto &c : cs) {
    if (c.kind == Kind::True)
      return truth();
    if (c.kind == Kind::False)
      continue;
    if (c.kind == Kind::Or)
      for (auto &g : c.children)
        kept.push_back(std::move(g));
    else
      kept.push_back(std::move(c));
  }
  if (kept.empty())
    return falsity();
  if (kept.size() == 1)
    return std::move(kept[0]);
  return {Kind::Or, -1, std::move(kept)};
}

std::string ground_key(const std::string &name, const std::vector<ConstId> &args,
                       const model::TypeHierarchy &h) {
  std::string out = name + "[";
  for (std::size_t i = 0; i < args.size(); ++i)
    out += (i ? "," : "") + h.constant_name(args[i]);
  return out + "]";
}

std::optional<TaskIdx> GroundModel::find_task(const std::string &key) const {
  if (auto it = task_index.find(key); it != task_index.end())
    return it->second;
  return std::nullopt;
}

namespace {

DiagnosticError ground_error(const std::string &code, const std::string &msg) {
  return DiagnosticError(Diagnostic{Severity::Error, code, msg, {}});
}

std::string fresh_name(const Model &m, std::string name) {
  while (m.find_action(name) || m.find_compound_task(name))
    name += "_";
  return name;
}

/// Turns htn parameters into a synthetic `__top` task whose methods choose
/// their values; a goal over them becomes a final `__goal` action.
Model add_synthetic_top(Model m) {
  const std::string top = fresh_name(m, "__top");
  model::MethodSchema method;
  method.name = top;
  method.parameters = m.htn_parameters;
  method.task = {top, {}};
  method.network = m.initial_network;

  if (m.goal) {
    const auto free = model::free_variables(*m.goal);
    bool uses_params = false;
    for (const auto &p : m.htn_parameters)
      uses_params |= free.count(p.name) > 0;
    if (uses_params) {
      model::ActionSchema goal;
      goal.name = fresh_name(m, "__goal");
      goal.precondition = *m.goal;
      goal.synthetic = true;
      model::TaskInstance label{goal.name, {}};
      for (const auto &p : m.htn_parameters)
        if (free.count(p.name)) {
          goal.parameters.push_back(p);
          label.args.push_back(model::Term::variable(p.name));
        }
      model::TaskId id = "__goal";
      while (method.network.contains(id))
        id += "_";
      for (const auto &other : method.network.ids)
        method.network.order.emplace(other, id);
      method.network.add(id, std::move(label));
      m.actions.push_back(std::move(goal));
      m.goal.reset();
    }
  }

  m.compound_tasks.push_back({top, {}});
  m.methods.push_back(std::move(method));
  m.initial_network = {};
  m.initial_network.add("__top", {top, {}});
  m.htn_parameters.clear();
  return m;
}

class Grounder {
public:
  Grounder(std::shared_ptr<const Model> m, const GroundOptions &opt) : m_(*m), opt_(opt) {
    g_.model = std::move(m);
  }

  GroundModel run() {
    find_static_predicates();
    for (const auto &f : m_.init) {
      const AtomId id = g_.atoms.intern({f.predicate, f.args});
      if (static_preds_.count(f.predicate))
        static_facts_.insert({f.predicate, f.args});
      g_.initial_state.push_back(id);
    }
    std::sort(g_.initial_state.begin(), g_.initial_state.end());

    ground_actions();
    ground_compound_tasks();
    ground_methods();
    ground_initial_network();
    if (m_.goal)
      g_.goal = compile(*m_.goal, {});

    g_.stats.atoms = g_.atoms.size();
    g_.stats.static_predicates = static_preds_.size();
    g_.stats.actions = g_.actions.size();
    g_.stats.compound_tasks = g_.tasks.size() - g_.actions.size();
    g_.stats.methods = g_.methods.size();
    return std::move(g_);
  }

private:
  const Model &m_;
  const GroundOptions &opt_;
  GroundModel g_;
  std::set<std::string> static_preds_;
  std::set<GroundAtom> static_facts_;
  std::size_t instances_ = 0;

  std::vector<Binding> bind(const std::vector<TypedVariable> &params,
                            const std::vector<model::VariableConstraint> &vc = {}) {
    auto out = opt_.parallel ? substitutions_parallel(params, m_.types, vc)
                             : substitutions(params, m_.types, vc);
    instances_ += out.size();
    if (instances_ > opt_.max_instances)
      throw ground_error("ground-limit", "grounding exceeds the limit of " +
                                             std::to_string(opt_.max_instances) + " instances");
    return out;
  }

  void find_static_predicates() {
    std::set<std::string> changed;
    for (const auto &a : m_.actions) {
      for (const auto *atoms : {&a.add, &a.del})
        for (const auto &at : *atoms)
          changed.insert(at.predicate);
      for (const auto &ce : a.conditional)
        for (const auto *atoms : {&ce.add, &ce.del})
          for (const auto &at : *atoms)
            changed.insert(at.predicate);
    }
    for (const auto &p : m_.predicates)
      if (!changed.count(p.name))
        static_preds_.insert(p.name);
  }

  std::vector<ConstId> ground_args(const std::vector<model::Term> &terms, const Substitution &sub) const {
    std::vector<ConstId> out;
    for (const auto &t : terms)
      out.push_back(t.is_variable() ? sub.at(t.name) : t.constant);
    return out;
  }

  bool well_typed(const GroundAtom &a) const {
    const auto *decl = m_.find_predicate(a.predicate);
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!m_.types.has_type(a.args[i], decl->parameters[i]))
        return false;
    return true;
  }

  /// Effect atoms outside the predicate's type signature cannot exist in
  /// any state and are dropped.
  std::vector<AtomId> intern_all(const std::vector<model::Atom> &atoms, const Substitution &sub) {
    std::vector<AtomId> out;
    for (const auto &a : atoms) {
      GroundAtom ga{a.predicate, ground_args(a.args, sub)};
      if (well_typed(ga))
        out.push_back(g_.atoms.intern(ga));
    }
    return out;
  }

  /// Read-only on the atom table, so safe to call from parallel loops.
  Condition compile(const Formula &f, const Substitution &sub) const {
    using K = Formula::Kind;
    switch (f.kind) {
    case K::True:
      return Condition::truth();
    case K::False:
      return Condition::falsity();
    case K::Atom: {
      GroundAtom ga{f.atom.predicate, ground_args(f.atom.args, sub)};
      if (!well_typed(ga))
        return Condition::falsity();
      if (static_preds_.count(ga.predicate))
        return static_facts_.count(ga) ? Condition::truth() : Condition::falsity();
      if (auto id = g_.atoms.find(ga))
        return Condition::of_atom(*id);
      return Condition::falsity(); // never added and not initially true
    }
    case K::Equals: {
      const auto args = ground_args(f.terms, sub);
      return args[0] == args[1] ? Condition::truth() : Condition::falsity();
    }
    case K::Not:
      return Condition::negation(compile(f.children[0], sub));
    case K::And:
    case K::Or: {
      std::vector<Condition> cs;
      for (const auto &c : f.children)
        cs.push_back(compile(c, sub));
      return f.kind == K::And ? Condition::conjunction(std::move(cs))
                              : Condition::disjunction(std::move(cs));
    }
    case K::Imply: {
      std::vector<Condition> cs;
      cs.push_back(Condition::negation(compile(f.children[0], sub)));
      cs.push_back(compile(f.children[1], sub));
      return Condition::disjunction(std::move(cs));
    }
    case K::Exists:
    case K::Forall: {
      std::vector<Condition> cs;
      for (const auto &b : substitutions(f.bound, m_.types)) {
        Substitution inner = sub;
        for (std::size_t i = 0; i < b.size(); ++i)
          inner[f.bound[i].name] = b[i];
        cs.push_back(compile(f.children[0], inner));
      }
      return f.kind == K::Exists ? Condition::disjunction(std::move(cs))
                                 : Condition::conjunction(std::move(cs));
    }
    }
    return Condition::truth();
  }

  struct PendingConditional {
    const model::ConditionalEffect *effect;
    Substitution sub;
    std::vector<AtomId> add, del;
  };

  static void sort_unique(std::vector<AtomId> &v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  void ground_actions() {
    // Pass 1 interns every effect atom so the atom universe is complete
    // before preconditions are compiled against it.
    std::vector<const model::ActionSchema *> schema_of;
    std::vector<Substitution> subs;
    std::vector<std::vector<PendingConditional>> pending;
    for (const auto &schema : m_.actions) {
      for (const auto &b : bind(schema.parameters)) {
        Substitution sub = to_substitution(schema.parameters, b);
        GroundAction a;
        a.name = schema.name;
        a.args = b;
        a.key = ground_key(schema.name, b, m_.types);
        a.synthetic = schema.synthetic;
        a.add = intern_all(schema.add, sub);
        a.del = intern_all(schema.del, sub);
        std::vector<PendingConditional> conds;
        for (const auto &ce : schema.conditional) {
          for (const auto &fb : substitutions(ce.forall, m_.types)) {
            Substitution inner = sub;
            for (std::size_t i = 0; i < fb.size(); ++i)
              inner[ce.forall[i].name] = fb[i];
            conds.push_back({&ce, inner, intern_all(ce.add, inner), intern_all(ce.del, inner)});
          }
        }
        g_.actions.push_back(std::move(a));
        schema_of.push_back(&schema);
        subs.push_back(std::move(sub));
        pending.push_back(std::move(conds));
      }
    }

    const int n = static_cast<int>(g_.actions.size());
#pragma omp parallel for schedule(dynamic) if (opt_.parallel)
    for (int i = 0; i < n; ++i) {
      GroundAction &a = g_.actions[i];
      a.precondition = compile(schema_of[i]->precondition, subs[i]);
      for (auto &pc : pending[i]) {
        Condition c = compile(pc.effect->condition, pc.sub);
        if (c.kind == Condition::Kind::False || (pc.add.empty() && pc.del.empty()))
          continue;
        if (c.kind == Condition::Kind::True) {
          a.add.insert(a.add.end(), pc.add.begin(), pc.add.end());
          a.del.insert(a.del.end(), pc.del.begin(), pc.del.end());
        } else {
          sort_unique(pc.add);
          sort_unique(pc.del);
          a.conditional.push_back({std::move(c), std::move(pc.add), std::move(pc.del)});
        }
      }
      sort_unique(a.add);
      sort_unique(a.del);
    }

    for (ActionId i = 0; i < n; ++i) {
      const GroundAction &a = g_.actions[i];
      GroundTask t;
      t.key = a.key;
      t.name = a.name;
      t.args = a.args;
      t.primitive = true;
      t.action = i;
      add_task(std::move(t));
    }
  }

  void add_task(GroundTask t) {
    g_.task_index.emplace(t.key, static_cast<TaskIdx>(g_.tasks.size()));
    g_.tasks.push_back(std::move(t));
  }

  void ground_compound_tasks() {
    for (const auto &schema : m_.compound_tasks)
      for (const auto &b : bind(schema.parameters)) {
        GroundTask t;
        t.key = ground_key(schema.name, b, m_.types);
        t.name = schema.name;
        t.args = b;
        add_task(std::move(t));
      }
  }

  std::optional<TaskIdx> lookup(const model::TaskInstance &ti, const Substitution &sub) const {
    return g_.find_task(ground_key(ti.name, ground_args(ti.args, sub), m_.types));
  }

  /// Ground copy of a lifted network; nullopt when some label has no
  /// ground task (an argument outside the task's parameter types).
  std::optional<GroundNetwork> ground_network(const model::LiftedNetwork &net,
                                              const Substitution &sub) const {
    GroundNetwork out;
    for (const auto &id : net.ids) {
      auto t = lookup(net.label(id), sub);
      if (!t)
        return std::nullopt;
      out.add(id, *t);
    }
    out.order = net.order;
    return out;
  }

  void ground_methods() {
    for (const auto &schema : m_.methods) {
      for (const auto &b : bind(schema.parameters, schema.network.constraints)) {
        const Substitution sub = to_substitution(schema.parameters, b);
        auto task = lookup(schema.task, sub);
        auto net = ground_network(schema.network, sub);
        if (!task || !net)
          continue;
        GroundMethod gm;
        gm.key = ground_key(schema.name, b, m_.types);
        gm.name = schema.name;
        gm.args = b;
        gm.task = *task;
        gm.network = std::move(*net);
        g_.tasks[*task].methods.push_back(static_cast<MethodId>(g_.methods.size()));
        g_.methods.push_back(std::move(gm));
      }
    }
  }

  void ground_initial_network() {
    const auto &net = m_.initial_network;
    if (substitutions({}, m_.types, net.constraints).empty())
      throw ground_error("ground-infeasible",
                         "the constraints of the initial task network cannot be satisfied");
    auto ground = ground_network(net, {});
    if (!ground)
      throw ground_error("ground-infeasible", "the initial task network has no ground instance");
    g_.initial_network = std::move(*ground);
    if (g_.synthetic_top) {
      const GroundTask &top = g_.tasks[g_.initial_network.label("__top")];
      if (top.methods.empty())
        throw ground_error("ground-infeasible",
                           "no constants satisfy the htn parameters and their constraints");
    }
  }

public:
  void mark_synthetic_top() { g_.synthetic_top = true; }
};

} // namespace

GroundModel ground(const Model &m, const GroundOptions &options) {
  if (m.has_method_preconditions())
    throw ground_error("uncompiled-method-precondition",
                       "method preconditions must be compiled into actions before grounding");
  const bool top = !m.htn_parameters.empty();
  auto shared = std::make_shared<const Model>(top ? add_synthetic_top(m) : m);
  Grounder grounder(std::move(shared), options);
  if (top)
    grounder.mark_synthetic_top();
  GroundModel g = grounder.run();
  return options.prune ? reachability_prune(g) : g;
}

GroundModel reachability_prune(const GroundModel &g) {
  std::vector<bool> keep_task(g.tasks.size(), false);
  std::vector<bool> keep_method(g.methods.size(), false);
  std::vector<TaskIdx> todo;
  for (const auto &[id, t] : g.initial_network.alpha)
    todo.push_back(t);
  while (!todo.empty()) {
    const TaskIdx t = todo.back();
    todo.pop_back();
    if (keep_task[t])
      continue;
    keep_task[t] = true;
    for (MethodId mid : g.tasks[t].methods) {
      keep_method[mid] = true;
      for (const auto &[id, sub] : g.methods[mid].network.alpha)
        todo.push_back(sub);
    }
  }

  GroundModel out;
  out.model = g.model;
  out.atoms = g.atoms;
  out.initial_state = g.initial_state;
  out.goal = g.goal;
  out.synthetic_top = g.synthetic_top;
  out.stats = g.stats;

  std::vector<ActionId> action_map(g.actions.size(), -1);
  std::vector<TaskIdx> task_map(g.tasks.size(), -1);
  std::vector<MethodId> method_map(g.methods.size(), -1);
  for (std::size_t t = 0; t < g.tasks.size(); ++t) {
    if (!keep_task[t])
      continue;
    task_map[t] = static_cast<TaskIdx>(out.tasks.size());
    GroundTask task = g.tasks[t];
    if (task.primitive) {
      action_map[task.action] = static_cast<ActionId>(out.actions.size());
      out.actions.push_back(g.actions[task.action]);
      task.action = action_map[task.action];
    }
    out.task_index.emplace(task.key, task_map[t]);
    out.tasks.push_back(std::move(task));
  }
  for (std::size_t mid = 0; mid < g.methods.size(); ++mid) {
    if (!keep_method[mid])
      continue;
    method_map[mid] = static_cast<MethodId>(out.methods.size());
    GroundMethod m = g.methods[mid];
    m.task = task_map[m.task];
    for (auto &[id, t] : m.network.alpha)
      t = task_map[t];
    out.methods.push_back(std::move(m));
  }
  for (auto &task : out.tasks) {
    std::vector<MethodId> ms;
    for (MethodId mid : task.methods)
      ms.push_back(method_map[mid]);
    task.methods = std::move(ms);
  }
  out.initial_network = g.initial_network;
  for (auto &[id, t] : out.initial_network.alpha)
    t = task_map[t];

  const std::size_t compound_before = g.tasks.size() - g.actions.size();
  const std::size_t compound_after = out.tasks.size() - out.actions.size();
  out.stats.pruned_actions += g.actions.size() - out.actions.size();
  out.stats.pruned_compound_tasks += compound_before - compound_after;
  out.stats.pruned_methods += g.methods.size() - out.methods.size();
  out.stats.actions = out.actions.size();
  out.stats.compound_tasks = compound_after;
  out.stats.methods = out.methods.size();
  return out;
}

std::string to_string(const Condition &c, const GroundModel &g) {
  auto list = [&](const char *head) {
    std::string out = std::string("(") + head;
    for (const auto &child : c.children)
      out += " " + to_string(child, g);
    return out + ")";
  };
  switch (c.kind) {
  case Condition::Kind::True:
    return "()";
  case Condition::Kind::False:
    return "(or)";
  case Condition::Kind::Atom:
    return g.atoms.to_string(c.atom, g.types());
  case Condition::Kind::Not:
    return list("not");
  case Condition::Kind::And:
    return list("and");
  case Condition::Kind::Or:
    return list("or");
  }
  return "()";
}

std::string ground_listing(const GroundModel &g) {
  const auto &h = g.types();
  auto atoms = [&](const std::vector<AtomId> &ids) {
    std::string out;
    for (AtomId a : ids)
      out += " " + g.atoms.to_string(a, h);
    return out;
  };
  auto network = [&](const GroundNetwork &net) {
    std::string out;
    for (const auto &id : net.ids)
      out += " " + id + "=" + g.tasks[net.label(id)].key;
    out += " order";
    for (const auto &[a, b] : net.order)
      out += " " + a + "<" + b;
    return out;
  };

  std::string out;
  const auto &s = g.stats;
  out += "stats atoms=" + std::to_string(s.atoms) + " static-predicates=" +
         std::to_string(s.static_predicates) + " actions=" + std::to_string(s.actions) +
         " compound-tasks=" + std::to_string(s.compound_tasks) + " methods=" +
         std::to_string(s.methods) + " pruned-actions=" + std::to_string(s.pruned_actions) +
         " pruned-compound-tasks=" + std::to_string(s.pruned_compound_tasks) +
         " pruned-methods=" + std::to_string(s.pruned_methods) + "\n";
  for (AtomId a : g.initial_state)
    out += "init " + g.atoms.to_string(a, h) + "\n";
  for (const auto &a : g.actions) {
    out += "action " + a.key + " pre " + to_string(a.precondition, g) + " add" + atoms(a.add) +
           " del" + atoms(a.del);
    for (const auto &ce : a.conditional)
      out += " when " + to_string(ce.condition, g) + " add" + atoms(ce.add) + " del" + atoms(ce.del);
    out += "\n";
  }
  for (const auto &t : g.tasks) {
    if (t.primitive)
      continue;
    out += "task " + t.key + " methods";
    for (MethodId m : t.methods)
      out += " " + g.methods[m].key;
    out += "\n";
  }
  for (const auto &m : g.methods)
    out += "method " + m.key + " task " + g.tasks[m.task].key + " subtasks" + network(m.network) + "\n";
  out += "initial" + network(g.initial_network) + "\n";
  if (g.goal)
    out += "goal " + to_string(*g.goal, g) + "\n";
  return out;
}

} // namespace hddl::grounding
