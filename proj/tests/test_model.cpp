#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hddl/model/model.hpp"
#include "hddl/syntax/parser.hpp"
#include "test_support.hpp"

using namespace hddl;
using namespace hddl::model;
using hddl_test::analyze_corpus;
using hddl_test::load_model;

namespace {

AnalysisResult analyze_text(const std::string &domain, const std::string &problem,
                            AnalyzeOptions opt = {}) {
  return analyze(syntax::parse_domain_text(domain, "d.hddl"),
                 syntax::parse_problem_text(problem, "p.hddl"), opt);
}

std::string empty_problem(const std::string &domain) {
  return "(define (problem p) (:domain " + domain + ") (:init))";
}

const Diagnostic *find_code(const AnalysisResult &r, const std::string &code) {
  for (const auto &d : r.diagnostics)
    if (d.code == code)
      return &d;
  return nullptr;
}

bool has_error(const AnalysisResult &r, const std::string &code) {
  const Diagnostic *d = find_code(r, code);
  return d && d->severity == Severity::Error && !r.model;
}

bool has_warning(const AnalysisResult &r, const std::string &code) {
  const Diagnostic *d = find_code(r, code);
  return d && d->severity == Severity::Warning;
}

std::set<std::string> term_vars(const std::vector<Term> &ts) {
  std::set<std::string> out;
  for (const auto &t : ts)
    if (t.is_variable())
      out.insert(t.name);
  return out;
}

} // namespace

TEST_CASE("analyze: transport domain and example problem") {
  const Model m = load_model("transport.hddl", "transport-p-verbatim.hddl");
  CHECK(m.compound_tasks.size() == 2);
  CHECK(m.methods.size() == 4);
  CHECK(m.actions.size() == 3);
  CHECK(m.initial_network.size() == 2);
  CHECK(m.initial_network.order.empty());
  CHECK(m.init.size() == 6);
  CHECK_FALSE(m.goal.has_value());
  CHECK(m.types.constants_of(*m.types.find_type("location")).size() == 3);

  const ActionSchema &drive = *m.find_action("drive");
  REQUIRE(drive.add.size() == 1);
  CHECK(to_string(drive.add[0]) == "(tat ?l2)");
  REQUIRE(drive.del.size() == 1);
  CHECK(to_string(drive.del[0]) == "(tat ?l1)");

  const MethodSchema &direct = *m.find_method("m-direct");
  REQUIRE(direct.network.constraints.size() == 1);
  CHECK(direct.network.constraints[0].kind == VariableConstraint::Kind::NotEqual);
}

TEST_CASE("analyze: verbatim m-direct reports the undeclared variable") {
  const auto r = analyze_corpus("transport-verbatim.hddl", "transport-p-verbatim.hddl");
  REQUIRE(has_error(r, "undeclared-variable"));
  CHECK(find_code(r, "undeclared-variable")->message == "undeclared variable ?li");
  // The m-deliver typo is well-typed and passes on its own.
  CHECK(analyze_corpus("transport-deliver-verbatim.hddl", "transport-p-verbatim.hddl").model);
}

TEST_CASE("analyze: subtask argument of a supertype is rejected") {
  const auto r = analyze(
      syntax::parse_domain_text(hddl_test::corpus("invalid/supertype-argument.hddl")),
      syntax::parse_problem_text(empty_problem("narrowing")));
  CHECK(has_error(r, "type-mismatch"));
}

TEST_CASE("analyze: constants type-check through membership") {
  const Model m = load_model("multi-type-domain.hddl", "multi-type-problem.hddl");
  const auto &h = m.types;
  const ConstId duck = *h.find_constant("duck");
  CHECK(h.declared_types(duck).size() == 2);
  CHECK(h.has_type(duck, *h.find_type("vehicle")));
  CHECK(h.has_type(duck, *h.find_type("amphibian")));
  CHECK_FALSE(h.has_type(*h.find_constant("car"), *h.find_type("truck")));
  CHECK(h.constants_of(*h.find_type("vehicle")) == std::vector<ConstId>{duck, *h.find_constant("car")});
  CHECK(h.is_subtype(*h.find_type("truck"), TypeHierarchy::kObject));

  CHECK(load_model("constants-domain.hddl", "constants-problem.hddl").types.find_constant("base"));
}

TEST_CASE("analyze: errors") {
  const std::string p = empty_problem("d");
  CHECK(has_error(analyze_text("(define (domain d) (:predicates (p) (p)))", p), "duplicate-name"));
  CHECK(has_error(analyze_text("(define (domain d) (:requirements :htn) (:task t :parameters ()) "
                               "(:action t :parameters ()))",
                               p),
                  "name-clash"));
  CHECK(has_error(analyze_text("(define (domain d) (:requirements :htn) (:task t :parameters ()) "
                               "(:method m :parameters () :task (t) :subtasks (u)))",
                               p),
                  "unknown-task"));
  CHECK(has_error(analyze_text("(define (domain d) (:requirements :htn) (:task t :parameters ()) "
                               "(:method m :parameters () :task (t) :subtasks (t1 (t)) "
                               ":ordering (t1 < t9)))",
                               p),
                  "unknown-ordering-id"));
  CHECK(has_error(analyze_text("(define (domain d) (:requirements :htn) (:task t :parameters ()) "
                               "(:method m :parameters () :task (t) :subtasks (and (x (t)) (x (t)))))",
                               p),
                  "duplicate-subtask-id"));
  CHECK(has_error(analyze_text("(define (domain d) (:predicates (p)) "
                               "(:action a :parameters () :precondition (p x)))",
                               p),
                  "arity-mismatch"));
  CHECK(has_error(analyze_text("(define (domain d) (:action a :parameters () :precondition (q)))", p),
                  "unknown-predicate"));
  CHECK(has_error(analyze_text("(define (domain d) (:types a - b b - a))", p), "type-cycle"));
  CHECK(has_error(analyze_text("(define (domain d) (:constants k - nothing))", p), "unknown-type"));
  CHECK(has_error(analyze_text(hddl_test::corpus("either-domain.hddl"), empty_problem("pets")),
                  "unsupported-feature"));
  CHECK(has_error(analyze_text("(define (domain d))", empty_problem("other")), "domain-mismatch"));
  CHECK(has_error(analyze_text("(define (domain d) (:predicates (p ?x - object)))",
                               "(define (problem p) (:domain d) (:init (p ghost)))"),
                  "unknown-constant"));
}

TEST_CASE("analyze: cyclic ordering in the invalid corpus") {
  const auto r = analyze_text(hddl_test::corpus("invalid/cyclic-ordering.hddl"), empty_problem("cyclic"));
  REQUIRE(has_error(r, "ordering-cycle"));
  CHECK(find_code(r, "ordering-cycle")->message.find("t1 < t2 < t1") != std::string::npos);
}

TEST_CASE("analyze: method preconditions need :htn-method-prec even without strictness") {
  const auto r = analyze_text(hddl_test::corpus("invalid/method-prec-no-flag.hddl"), empty_problem("noflag"));
  CHECK(has_error(r, "missing-requirement"));
}

TEST_CASE("analyze: other missing requirements warn, or fail under strictness") {
  std::string domain = hddl_test::corpus("quantified-domain.hddl");
  const auto start = domain.find("(:requirements");
  domain.replace(start, domain.find(")", start) - start + 1, "(:requirements :typing :htn)");
  const std::string problem = hddl_test::corpus("quantified-problem.hddl");

  const auto lax = analyze_text(domain, problem);
  CHECK(lax.model);
  CHECK(has_warning(lax, "missing-requirement"));
  const auto strict = analyze_text(domain, problem, {true});
  CHECK(has_error(strict, "missing-requirement"));

  // :adl implies the precondition flags.
  domain.replace(domain.find(":typing :htn"), 12, ":adl :htn");
  CHECK_FALSE(find_code(analyze_text(domain, problem, {true}), "missing-requirement"));
}

TEST_CASE("analyze: warnings") {
  const auto r = analyze_text(
      "(define (domain d) (:requirements :htn :typing) (:types k) "
      "(:predicates (p) (unused)) (:task t :parameters ()) (:task lonely :parameters ()) "
      "(:method m :parameters (?x - k) :task (t) :subtasks (a)) "
      "(:action a :parameters () :precondition (p)))",
      "(define (problem q) (:domain d) (:htn :tasks (t)) (:init (not (p))))");
  REQUIRE(r.model);
  CHECK(has_warning(r, "unused-predicate"));
  CHECK(has_warning(r, "unreachable-task"));
  CHECK(has_warning(r, "unused-parameter"));
  CHECK(has_warning(r, "negative-init"));
  CHECK(has_warning(r, "no-method"));
  CHECK(r.model->init.empty());
}

TEST_CASE("analyze: htn parameters and goal") {
  const Model m = load_model("transport.hddl", "transport-htn-params.hddl");
  REQUIRE(m.htn_parameters.size() == 1);
  CHECK(m.htn_parameters[0].name == "d");
  CHECK(m.initial_network.constraints.size() == 1);
  REQUIRE(m.goal);
  CHECK(free_variables(*m.goal) == std::set<std::string>{"d"});
}

TEST_CASE("analyze: conditional effects") {
  const Model m = load_model("cond-effects-domain.hddl", "cond-effects-problem.hddl");
  const ActionSchema &flip = *m.find_action("flip");
  CHECK(flip.add.size() == 1);
  REQUIRE(flip.conditional.size() == 1);
  CHECK(flip.conditional[0].forall.size() == 1);
  CHECK(flip.conditional[0].condition.kind == Formula::Kind::Atom);
  CHECK(flip.conditional[0].add.size() == 1);
  const ActionSchema &test = *m.find_action("test");
  REQUIRE(test.conditional.size() == 1);
  CHECK(test.conditional[0].condition.kind == Formula::Kind::True);
  CHECK(test.conditional[0].del.size() == 1);
}

TEST_CASE("analyze is deterministic and keeps method variables in scope") {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"transport.hddl", "transport-1pkg.hddl"},
      {"transport.hddl", "transport-2pkg.hddl"},
      {"transport.hddl", "transport-aliases.hddl"},
      {"transport.hddl", "transport-goal.hddl"},
      {"transport.hddl", "transport-htn-params.hddl"},
      {"shop-order-domain.hddl", "shop-order-problem.hddl"},
      {"quantified-domain.hddl", "quantified-problem.hddl"},
      {"cond-effects-domain.hddl", "cond-effects-problem.hddl"},
      {"method-prec-domain.hddl", "method-prec-problem.hddl"},
      {"constants-domain.hddl", "constants-problem.hddl"},
      {"multi-type-domain.hddl", "multi-type-problem.hddl"},
      {"counter-domain.hddl", "counter-problem.hddl"},
      {"empty-domain.hddl", "empty-problem.hddl"},
  };
  for (const auto &[d, p] : pairs) {
    CAPTURE(d);
    CAPTURE(p);
    const auto a = analyze_corpus(d, p);
    const auto b = analyze_corpus(d, p);
    REQUIRE(a.model);
    CHECK(*a.model == *b.model);
    REQUIRE(a.diagnostics.size() == b.diagnostics.size());
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i)
      CHECK(format_diagnostic(a.diagnostics[i]) == format_diagnostic(b.diagnostics[i]));

    for (const auto &m : a.model->methods) {
      std::set<std::string> params;
      for (const auto &v : m.parameters)
        params.insert(v.name);
      std::set<std::string> used = term_vars(m.task.args);
      for (const auto &[id, t] : m.network.alpha)
        for (const auto &v : term_vars(t.args))
          used.insert(v);
      for (const auto &c : m.network.constraints)
        for (const auto &v : term_vars({c.lhs, c.rhs}))
          used.insert(v);
      if (m.precondition)
        for (const auto &v : free_variables(*m.precondition))
          used.insert(v);
      for (const auto &v : used)
        CHECK(params.count(v));
      CHECK(is_strict_partial_order(m.network.ids, m.network.order));
    }
  }
}

TEST_CASE("check_partial_order") {
  auto net = [](const std::string &body) {
    const auto d = syntax::parse_domain_text(
        "(define (domain d) (:method m :parameters () :task (t) "
        ":subtasks (and (t1 (a)) (t2 (a)) (t3 (a))) " +
        body + "))");
    return d.methods[0].network;
  };
  CHECK_FALSE(check_partial_order(net(":ordering (t1 < t2)")));
  CHECK_FALSE(check_partial_order(net("")));
  CHECK(check_partial_order(net(":ordering (and (t1 < t2) (t2 < t1))")) ==
        std::vector<std::string>{"t1", "t2"});
  CHECK(check_partial_order(net(":ordering (and (t1 < t2) (t2 < t3) (t3 < t1))")) ==
        std::vector<std::string>{"t1", "t2", "t3"});
  CHECK_THROWS_AS(check_partial_order(net(":ordering (t1 < t7)")), DiagnosticError);
}

TEST_CASE("total_order_expand") {
  const Model m = load_model("transport.hddl", "transport-1pkg.hddl");
  const auto &deliver = m.find_method("m-deliver")->network;
  CHECK(deliver.size() == 4);
  CHECK(deliver.order.size() == 6);
  CHECK(total_order_expand(deliver) == deliver);

  LiftedNetwork one;
  one.add("a", {"x", {}});
  CHECK(total_order_expand(one).order.empty());
  CHECK(total_order_expand(LiftedNetwork{}).empty());
  CHECK(m.find_method("m-already-there")->network.empty());
}

TEST_CASE("compile_method_preconditions") {
  const Model m = load_model("transport.hddl", "transport-1pkg.hddl");
  const Model c = compile_method_preconditions(m);
  CHECK_FALSE(c.has_method_preconditions());

  const MethodSchema &there = *c.find_method("m-already-there");
  REQUIRE(there.network.size() == 1);
  const TaskInstance &label = there.network.label(there.network.ids[0]);
  CHECK(to_string(label) == "(__prec_m-already-there ?l)");
  const ActionSchema &prec = *c.find_action("__prec_m-already-there");
  CHECK(prec.synthetic);
  CHECK(to_string(prec.precondition, c.types) == "(tat ?l)");
  CHECK(prec.add.empty());
  CHECK(prec.del.empty());
  REQUIRE(prec.parameters.size() == 1);
  CHECK(prec.parameters[0].name == "l");

  CHECK(*c.find_method("m-deliver") == *m.find_method("m-deliver"));

  // Partially ordered body: the guard precedes both, which stay unordered.
  const auto r = analyze_text(
      "(define (domain d) (:requirements :htn :htn-method-prec) (:predicates (ok)) "
      "(:task t :parameters ()) "
      "(:method m :parameters () :task (t) :precondition (ok) :subtasks (and (a (x)) (b (x)))) "
      "(:action x :parameters ()) (:action __prec_m :parameters ()))",
      "(define (problem p) (:domain d) (:htn :tasks (t)) (:init (ok)))");
  REQUIRE(r.model);
  const Model pc = compile_method_preconditions(*r.model);
  const auto &net = pc.find_method("m")->network;
  CHECK(net.ids == std::vector<TaskId>{"__prec", "a", "b"});
  CHECK(net.order == OrderRelation{{"__prec", "a"}, {"__prec", "b"}});
  // The user already owns __prec_m, so the fresh name gets a suffix.
  CHECK(net.label("__prec").name == "__prec_m_");
  CHECK(pc.find_action("__prec_m_")->synthetic);
}
