#include <algorithm>
#include <functional>
#include <map>

#include "hddl/model/model.hpp"

namespace hddl::model {

using namespace syntax;

namespace {

using Scope = std::map<std::string, TypeId>;

const std::set<std::string> kKnownRequirements = {
    "strips",
    "typing",
    "negative-preconditions",
    "disjunctive-preconditions",
    "equality",
    "existential-preconditions",
    "universal-preconditions",
    "quantified-preconditions",
    "conditional-effects",
    "adl",
    "htn",
    "htn-method-prec"};

std::set<std::string> expand_requirements(const std::vector<std::string> &a,
                                          const std::vector<std::string> &b) {
  std::set<std::string> out(a.begin(), a.end());
  out.insert(b.begin(), b.end());
  if (out.count("adl"))
    out.insert({"strips", "typing", "negative-preconditions", "disjunctive-preconditions",
                "equality", "quantified-preconditions", "conditional-effects"});
  if (out.count("quantified-preconditions"))
    out.insert({"existential-preconditions", "universal-preconditions"});
  return out;
}

/// Topmost span start, for diagnostics about sections without own spans.
SourceSpan head(const NodeSpan &s) {
  SourceSpan out = s.value;
  out.end_line = out.start_line;
  out.end_col = out.start_col;
  return out;
}

class Analyzer {
public:
  Analyzer(const AstDomain &d, const AstProblem &p, const AnalyzeOptions &opt)
      : d_(d), p_(p), opt_(opt) {}

  AnalysisResult run() {
    m_.domain_name = d_.name;
    m_.problem_name = p_.name;
    m_.requirements = expand_requirements(d_.requirements, p_.requirements);
    for (const auto &r : d_.requirements)
      if (!kKnownRequirements.count(r))
        warning("unknown-requirement", "unknown requirement ':" + r + "' is ignored",
                head(d_.span));
    for (const auto &r : p_.requirements)
      if (!kKnownRequirements.count(r))
        warning("unknown-requirement", "unknown requirement ':" + r + "' is ignored",
                head(p_.span));

    if (p_.domain_name != d_.name)
      error("domain-mismatch",
            "problem refers to domain '" + p_.domain_name + "' but the domain is '" + d_.name + "'",
            head(p_.span));

    if (!declare_types())
      return finish();
    declare_constants(d_.constants, "constant");
    declare_constants(p_.objects, "object");
    m_.types.finalize();

    declare_predicates();
    declare_tasks();
    for (const auto &a : d_.actions)
      action(a);
    for (const auto &m : d_.methods)
      method(m);
    problem();
    usage_warnings();
    return finish();
  }

private:
  const AstDomain &d_;
  const AstProblem &p_;
  const AnalyzeOptions &opt_;
  Model m_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> used_predicates_;
  std::set<std::string> *used_vars_ = nullptr;

  AnalysisResult finish() {
    AnalysisResult r;
    r.diagnostics = std::move(diags_);
    if (!has_errors(r.diagnostics))
      r.model = std::move(m_);
    return r;
  }

  void error(const std::string &code, const std::string &msg, const SourceSpan &span) {
    diags_.push_back({Severity::Error, code, msg, span});
  }
  void warning(const std::string &code, const std::string &msg, const SourceSpan &span) {
    diags_.push_back({Severity::Warning, code, msg, span});
  }

  void require(const std::string &flag, const std::string &what, const SourceSpan &span) {
    if (m_.requirements.count(flag))
      return;
    const std::string msg = what + " requires ':" + flag + "'";
    if (opt_.strict_requirements)
      error("missing-requirement", msg, span);
    else
      warning("missing-requirement", msg, span);
  }

  // ---- types and constants --------------------------------------------

  bool declare_types() {
    auto &h = m_.types;
    if (!d_.types.empty())
      require("typing", "a ':types' section", head(d_.span));
    for (const auto &t : d_.types) {
      const TypeId id = h.add_type(t.name);
      if (!t.type)
        continue;
      if (t.type->either) {
        error("unsupported-feature", "'either' types are not supported", t.span.value);
        continue;
      }
      h.add_parent(id, h.add_type(t.type->names.front()));
    }
    for (TypeId t = 1; t < static_cast<TypeId>(h.type_count()); ++t)
      if (h.parents(t).empty())
        h.add_parent(t, TypeHierarchy::kObject);
    if (auto cycle = h.find_cycle()) {
      std::string msg = "type hierarchy is cyclic:";
      for (TypeId t : *cycle)
        msg += " " + h.type_name(t);
      error("type-cycle", msg, head(d_.span));
      return false;
    }
    return true;
  }

  std::optional<TypeId> resolve_type(const AstTypedName &n) {
    if (!n.type)
      return TypeHierarchy::kObject;
    if (n.type->either) {
      error("unsupported-feature", "'either' types are not supported", n.span.value);
      return std::nullopt;
    }
    const std::string &name = n.type->names.front();
    if (auto t = m_.types.find_type(name))
      return t;
    error("unknown-type", "unknown type '" + name + "'", n.span.value);
    return std::nullopt;
  }

  void declare_constants(const AstTypedList &list, const std::string &what) {
    for (const auto &n : list) {
      auto t = resolve_type(n);
      if (!t)
        continue;
      const ConstId c = m_.types.add_constant(n.name);
      if (!m_.types.add_constant_type(c, *t))
        warning("duplicate-name",
                what + " '" + n.name + "' is declared twice with type " + m_.types.type_name(*t),
                n.span.value);
    }
  }

  std::vector<TypedVariable> parameters(const AstTypedList &list, Scope &scope,
                                        const std::string &owner) {
    std::vector<TypedVariable> out;
    for (const auto &n : list) {
      const TypeId t = resolve_type(n).value_or(TypeHierarchy::kObject);
      if (scope.count(n.name))
        error("duplicate-name", "parameter ?" + n.name + " of " + owner + " is declared twice",
              n.span.value);
      scope[n.name] = t;
      out.push_back({n.name, t});
    }
    return out;
  }

  // ---- terms, atoms and formulas --------------------------------------

  Term term(const AstTerm &t, const Scope &scope) {
    if (t.is_variable) {
      if (!scope.count(t.name))
        error("undeclared-variable", "undeclared variable ?" + t.name, t.span.value);
      else if (used_vars_)
        used_vars_->insert(t.name);
      return Term::variable(t.name);
    }
    if (auto c = m_.types.find_constant(t.name))
      return Term::constant_term(t.name, *c);
    error("unknown-constant", "unknown constant '" + t.name + "'", t.span.value);
    return Term::variable(t.name);
  }

  /// Type of a resolved term when known; constants have no single type.
  std::optional<TypeId> var_type(const Term &t, const Scope &scope) {
    if (!t.is_variable())
      return std::nullopt;
    auto it = scope.find(t.name);
    return it == scope.end() ? std::nullopt : std::optional<TypeId>(it->second);
  }

  /// Task arguments: variables must be subtypes of the parameter type and
  /// constants must belong to it.
  void check_task_arg(const Term &t, TypeId param, const Scope &scope, const AstTerm &src,
                      const std::string &task) {
    const auto &h = m_.types;
    if (auto vt = var_type(t, scope)) {
      if (!h.is_subtype(*vt, param))
        error("type-mismatch",
              "argument ?" + t.name + " of type " + h.type_name(*vt) + " does not fit parameter type " +
                  h.type_name(param) + " of task " + task,
              src.span.value);
    } else if (!t.is_variable() && !h.has_type(t.constant, param)) {
      error("type-mismatch",
            "constant " + t.name + " is not of type " + h.type_name(param) + " required by task " + task,
            src.span.value);
    }
  }

  /// Predicate arguments: variable types must be comparable with the
  /// parameter type (a supertype variable may still denote a fitting object).
  void check_predicate_arg(const Term &t, TypeId param, const Scope &scope, const AstTerm &src,
                           const std::string &pred) {
    const auto &h = m_.types;
    if (auto vt = var_type(t, scope)) {
      if (!h.is_subtype(*vt, param) && !h.is_subtype(param, *vt))
        error("type-mismatch",
              "argument ?" + t.name + " of type " + h.type_name(*vt) + " can never fit parameter type " +
                  h.type_name(param) + " of predicate " + pred,
              src.span.value);
    } else if (!t.is_variable() && !h.has_type(t.constant, param)) {
      error("type-mismatch",
            "constant " + t.name + " is not of type " + h.type_name(param) + " required by predicate " + pred,
            src.span.value);
    }
  }

  Atom atom(const AstAtom &a, const Scope &scope) {
    Atom out{a.predicate, {}};
    for (const auto &t : a.args)
      out.args.push_back(term(t, scope));
    used_predicates_.insert(a.predicate);
    const PredicateDecl *decl = m_.find_predicate(a.predicate);
    if (!decl) {
      error("unknown-predicate", "unknown predicate '" + a.predicate + "'", a.span.value);
      return out;
    }
    if (decl->parameters.size() != a.args.size()) {
      error("arity-mismatch",
            "predicate " + a.predicate + " takes " + std::to_string(decl->parameters.size()) +
                " arguments, got " + std::to_string(a.args.size()),
            a.span.value);
      return out;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
      check_predicate_arg(out.args[i], decl->parameters[i], scope, a.args[i], a.predicate);
    return out;
  }

  std::vector<TypedVariable> bound_variables(const AstTypedList &list, Scope &scope) {
    std::vector<TypedVariable> out;
    for (const auto &n : list) {
      const TypeId t = resolve_type(n).value_or(TypeHierarchy::kObject);
      scope[n.name] = t;
      out.push_back({n.name, t});
    }
    return out;
  }

  Formula formula(const AstGd &g, const Scope &scope) {
    if (!g.requirement.empty())
      require(g.requirement, "this formula", g.span.value);
    Formula f;
    switch (g.kind) {
    case AstGd::Kind::Empty:
      f.kind = Formula::Kind::True;
      break;
    case AstGd::Kind::Atom:
      f.kind = Formula::Kind::Atom;
      f.atom = atom(g.atom, scope);
      break;
    case AstGd::Kind::Equals:
      f.kind = Formula::Kind::Equals;
      for (const auto &t : g.terms)
        f.terms.push_back(term(t, scope));
      break;
    case AstGd::Kind::Not:
    case AstGd::Kind::And:
    case AstGd::Kind::Or:
    case AstGd::Kind::Imply:
      f.kind = g.kind == AstGd::Kind::Not   ? Formula::Kind::Not
               : g.kind == AstGd::Kind::And ? Formula::Kind::And
               : g.kind == AstGd::Kind::Or  ? Formula::Kind::Or
                                            : Formula::Kind::Imply;
      for (const auto &c : g.children)
        f.children.push_back(formula(c, scope));
      break;
    case AstGd::Kind::Exists:
    case AstGd::Kind::Forall: {
      f.kind = g.kind == AstGd::Kind::Exists ? Formula::Kind::Exists : Formula::Kind::Forall;
      Scope inner = scope;
      f.bound = bound_variables(g.variables, inner);
      f.children.push_back(formula(g.children[0], inner));
      break;
    }
    }
    return f;
  }

  // ---- declarations ----------------------------------------------------

  void declare_predicates() {
    for (const auto &p : d_.predicates) {
      if (m_.find_predicate(p.name)) {
        error("duplicate-name", "predicate '" + p.name + "' is declared twice", p.span.value);
        continue;
      }
      Scope scope;
      PredicateDecl decl{p.name, {}};
      for (const auto &v : parameters(p.parameters, scope, "predicate " + p.name))
        decl.parameters.push_back(v.type);
      m_.predicates.push_back(std::move(decl));
    }
  }

  void declare_tasks() {
    if (!d_.tasks.empty() || !d_.methods.empty())
      require("htn", "compound tasks and methods", head(d_.span));
    for (const auto &t : d_.tasks) {
      if (m_.find_compound_task(t.name)) {
        error("duplicate-name", "task '" + t.name + "' is declared twice", t.span.value);
        continue;
      }
      Scope scope;
      m_.compound_tasks.push_back({t.name, parameters(t.parameters, scope, "task " + t.name)});
    }
  }

  void effect(const AstEffect &e, const Scope &scope, ActionSchema &a, int ctx) {
    if (!e.requirement.empty())
      require(e.requirement, "this effect", e.span.value);
    switch (e.kind) {
    case AstEffect::Kind::Empty:
      return;
    case AstEffect::Kind::And:
      for (const auto &c : e.children)
        effect(c, scope, a, ctx);
      return;
    case AstEffect::Kind::Add:
    case AstEffect::Kind::Delete: {
      Atom at = atom(e.atom, scope);
      const bool add = e.kind == AstEffect::Kind::Add;
      if (ctx < 0)
        (add ? a.add : a.del).push_back(std::move(at));
      else
        (add ? a.conditional[ctx].add : a.conditional[ctx].del).push_back(std::move(at));
      return;
    }
    case AstEffect::Kind::Forall: {
      ConditionalEffect ce = ctx < 0 ? ConditionalEffect{} : a.conditional[ctx];
      ce.add.clear();
      ce.del.clear();
      Scope inner = scope;
      for (const auto &n : e.variables) {
        if (scope.count(n.name))
          error("shadowed-variable", "effect variable ?" + n.name + " shadows an outer variable",
                n.span.value);
        const TypeId t = resolve_type(n).value_or(TypeHierarchy::kObject);
        inner[n.name] = t;
        ce.forall.push_back({n.name, t});
      }
      a.conditional.push_back(std::move(ce));
      effect(e.children[0], inner, a, static_cast<int>(a.conditional.size()) - 1);
      return;
    }
    case AstEffect::Kind::When: {
      ConditionalEffect ce = ctx < 0 ? ConditionalEffect{} : a.conditional[ctx];
      ce.add.clear();
      ce.del.clear();
      Formula cond = formula(*e.condition, scope);
      if (ce.condition.kind == Formula::Kind::True) {
        ce.condition = std::move(cond);
      } else {
        Formula both;
        both.kind = Formula::Kind::And;
        both.children = {std::move(ce.condition), std::move(cond)};
        ce.condition = std::move(both);
      }
      a.conditional.push_back(std::move(ce));
      effect(e.children[0], scope, a, static_cast<int>(a.conditional.size()) - 1);
      return;
    }
    }
  }

  void action(const AstAction &ast) {
    if (m_.find_action(ast.name)) {
      error("duplicate-name", "action '" + ast.name + "' is declared twice", ast.span.value);
      return;
    }
    if (m_.find_compound_task(ast.name))
      error("name-clash", "action '" + ast.name + "' has the name of a compound task",
            ast.span.value);
    Scope scope;
    ActionSchema a;
    a.name = ast.name;
    a.parameters = parameters(ast.parameters, scope, "action " + ast.name);
    if (ast.precondition)
      a.precondition = formula(*ast.precondition, scope);
    if (ast.effect)
      effect(*ast.effect, scope, a, -1);
    std::erase_if(a.conditional,
                  [](const ConditionalEffect &ce) { return ce.add.empty() && ce.del.empty(); });
    m_.actions.push_back(std::move(a));
  }

  /// Resolves a task reference; returns the parameter types when known.
  std::optional<std::vector<TypeId>> task_signature(const std::string &name) {
    auto types = [](const std::vector<TypedVariable> &ps) {
      std::vector<TypeId> out;
      for (const auto &p : ps)
        out.push_back(p.type);
      return out;
    };
    if (const auto *a = m_.find_action(name))
      return types(a->parameters);
    if (const auto *t = m_.find_compound_task(name))
      return types(t->parameters);
    return std::nullopt;
  }

  TaskInstance task_instance(const std::string &name, const std::vector<AstTerm> &args,
                             const Scope &scope, const SourceSpan &span) {
    TaskInstance out{name, {}};
    for (const auto &t : args)
      out.args.push_back(term(t, scope));
    auto sig = task_signature(name);
    if (!sig) {
      error("unknown-task", "unknown task '" + name + "'", span);
      return out;
    }
    if (sig->size() != args.size()) {
      error("arity-mismatch",
            "task " + name + " takes " + std::to_string(sig->size()) + " arguments, got " +
                std::to_string(args.size()),
            span);
      return out;
    }
    for (std::size_t i = 0; i < args.size(); ++i)
      check_task_arg(out.args[i], (*sig)[i], scope, args[i], name);
    return out;
  }

  LiftedNetwork network(const AstTaskNetwork &ast, const Scope &scope) {
    LiftedNetwork net;
    bool ids_ok = true;
    for (std::size_t k = 0; k < ast.subtasks.size(); ++k) {
      const AstSubtask &s = ast.subtasks[k];
      const TaskId id = s.id ? *s.id : "#" + std::to_string(k);
      if (net.contains(id)) {
        error("duplicate-subtask-id", "subtask id '" + id + "' is used twice", s.span.value);
        ids_ok = false;
        continue;
      }
      net.add(id, task_instance(s.task, s.args, scope, s.span.value));
    }
    if (ids_ok) {
      try {
        if (auto cycle = check_partial_order(ast)) {
          std::string msg = "ordering constraints form a cycle:";
          for (const auto &id : *cycle)
            msg += " " + id + " <";
          msg += " " + cycle->front();
          error("ordering-cycle", msg, ast.orderings.front().span.value);
        }
      } catch (const DiagnosticError &e) {
        diags_.push_back(e.diagnostic());
      }
    }
    if (ast.totally_ordered) {
      net = total_order_expand(std::move(net));
    } else {
      OrderRelation r;
      for (const auto &o : ast.orderings)
        if (net.contains(o.before) && net.contains(o.after))
          r.emplace(o.before, o.after);
      net.order = transitive_closure(r);
    }
    for (const auto &c : ast.constraints) {
      VariableConstraint vc;
      vc.kind = c.negated ? VariableConstraint::Kind::NotEqual : VariableConstraint::Kind::Equal;
      vc.lhs = term(c.lhs, scope);
      vc.rhs = term(c.rhs, scope);
      net.constraints.push_back(std::move(vc));
    }
    return net;
  }

  void method(const AstMethod &ast) {
    if (m_.find_method(ast.name)) {
      error("duplicate-name", "method '" + ast.name + "' is declared twice", ast.span.value);
      return;
    }
    Scope scope;
    std::set<std::string> used;
    MethodSchema m;
    m.name = ast.name;
    m.parameters = parameters(ast.parameters, scope, "method " + ast.name);
    used_vars_ = &used;

    if (m_.find_action(ast.task.name))
      error("unknown-task",
            "method " + ast.name + " decomposes '" + ast.task.name + "', which is an action",
            ast.task.span.value);
    else if (!m_.find_compound_task(ast.task.name))
      error("unknown-task", "method " + ast.name + " decomposes unknown task '" + ast.task.name + "'",
            ast.task.span.value);
    m.task = task_instance(ast.task.name, ast.task.args, scope, ast.task.span.value);

    if (ast.precondition) {
      if (!m_.requirements.count("htn-method-prec"))
        error("missing-requirement", "method precondition requires ':htn-method-prec'",
              ast.precondition->span.value);
      m.precondition = formula(*ast.precondition, scope);
    }
    m.network = network(ast.network, scope);
    used_vars_ = nullptr;

    for (std::size_t i = 0; i < m.parameters.size(); ++i)
      if (!used.count(m.parameters[i].name))
        warning("unused-parameter",
                "parameter ?" + m.parameters[i].name + " of method " + ast.name + " is never used",
                ast.parameters[i].span.value);
    m_.methods.push_back(std::move(m));
  }

  void problem() {
    Scope scope;
    if (p_.htn) {
      const AstHtn &htn = *p_.htn;
      require("htn", "an ':" + htn.problem_class + "' block", htn.span.value);
      if (htn.problem_class != "htn")
        error("unsupported-feature", "problem class ':" + htn.problem_class + "' is not supported",
              htn.span.value);
      std::set<std::string> used;
      if (htn.parameters)
        m_.htn_parameters = parameters(*htn.parameters, scope, "the initial task network");
      used_vars_ = &used;
      m_.initial_network = network(htn.network, scope);
      used_vars_ = nullptr;
      if (htn.parameters)
        for (std::size_t i = 0; i < m_.htn_parameters.size(); ++i)
          if (!used.count(m_.htn_parameters[i].name))
            warning("unused-parameter",
                    "htn parameter ?" + m_.htn_parameters[i].name + " is never used",
                    (*htn.parameters)[i].span.value);
    }

    std::set<GroundFact> seen;
    for (const auto &lit : p_.init) {
      Atom a = atom(lit.atom, scope);
      if (!lit.positive) {
        warning("negative-init",
                "negative initial literal " + to_string(a) + " is ignored (closed world)",
                lit.span.value);
        continue;
      }
      GroundFact f{a.predicate, {}};
      for (const auto &t : a.args)
        f.args.push_back(t.constant);
      if (std::find(f.args.begin(), f.args.end(), -1) != f.args.end())
        continue;
      if (seen.insert(f).second)
        m_.init.push_back(std::move(f));
    }

    if (p_.goal)
      m_.goal = formula(*p_.goal, scope);
  }

  void usage_warnings() {
    for (const auto &p : d_.predicates)
      if (!used_predicates_.count(p.name))
        warning("unused-predicate", "predicate '" + p.name + "' is never used", p.span.value);

    std::set<std::string> reached;
    std::vector<std::string> todo;
    for (const auto &[id, t] : m_.initial_network.alpha)
      todo.push_back(t.name);
    while (!todo.empty()) {
      std::string name = todo.back();
      todo.pop_back();
      if (!reached.insert(name).second)
        continue;
      for (const auto *m : m_.methods_for(name))
        for (const auto &[id, t] : m->network.alpha)
          todo.push_back(t.name);
    }
    for (const auto &t : d_.tasks) {
      if (!reached.count(t.name))
        warning("unreachable-task",
                "task '" + t.name + "' is unreachable from the initial task network", t.span.value);
      if (m_.methods_for(t.name).empty())
        warning("no-method", "compound task '" + t.name + "' has no method", t.span.value);
    }
    for (const auto &a : d_.actions)
      if (!reached.count(a.name))
        warning("unreachable-task",
                "action '" + a.name + "' is unreachable from the initial task network", a.span.value);
  }
};

} // namespace

AnalysisResult analyze(const AstDomain &domain, const AstProblem &problem,
                       const AnalyzeOptions &options) {
  return Analyzer(domain, problem, options).run();
}

std::optional<std::vector<std::string>> check_partial_order(const AstTaskNetwork &net) {
  std::set<std::string> ids;
  for (const auto &s : net.subtasks)
    if (s.id)
      ids.insert(*s.id);
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto &o : net.orderings) {
    for (const auto *id : {&o.before, &o.after})
      if (!ids.count(*id))
        throw DiagnosticError(Diagnostic{Severity::Error, "unknown-ordering-id",
                                         "ordering refers to unknown subtask id '" + *id + "'",
                                         o.span.value});
    succ[o.before].push_back(o.after);
  }

  std::map<std::string, int> colour;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> cycle;
  std::function<void(const std::string &)> visit = [&](const std::string &u) {
    colour[u] = 1;
    stack.push_back(u);
    for (const auto &v : succ[u]) {
      if (cycle)
        return;
      if (colour[v] == 1)
        cycle = std::vector<std::string>(std::find(stack.begin(), stack.end(), v), stack.end());
      else if (colour[v] == 0)
        visit(v);
    }
    stack.pop_back();
    colour[u] = 2;
  };
  for (const auto &s : net.subtasks)
    if (s.id && colour[*s.id] == 0 && !cycle)
      visit(*s.id);
  return cycle;
}

} // namespace hddl::model
