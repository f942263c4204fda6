#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hddl/planner/planner.hpp"
#include "test_support.hpp"

using namespace hddl;
using namespace hddl::planner;
using grounding::GroundModel;

namespace {

GroundModel ground_corpus(const std::string &d, const std::string &p, bool prune = true) {
  return grounding::ground(model::compile_method_preconditions(hddl_test::load_model(d, p)), {true, prune});
}

} // namespace

TEST_CASE("plan: transport lengths") {
  const GroundModel one = ground_corpus("transport.hddl", "transport-1pkg.hddl");
  const auto r1 = plan(one);
  REQUIRE(r1.outcome == Outcome::Solved);
  CHECK(r1.solution->plan.steps.size() == 4);
  CHECK(verification::verify(one, r1.solution->plan, r1.solution->tree).accepted);
  CHECK(r1.stats.nodes_expanded >= 4);
  CHECK(verification::write_witness(one, r1.solution->plan, r1.solution->tree) ==
        "==>\n0 drive c0 c1\n1 pick-up c1 p0\n2 drive c1 c0\n3 drop c0 p0\nroot 4\n"
        "4 deliver p0 c0 -> m-deliver 5 1 6 3\n5 get-to c1 -> m-direct 0\n6 get-to c0 -> m-direct 2\n<==\n");

  const GroundModel two = ground_corpus("transport.hddl", "transport-2pkg.hddl");
  const auto r2 = plan(two);
  REQUIRE(r2.outcome == Outcome::Solved);
  CHECK(r2.solution->plan.steps.size() == 8);
  CHECK(verification::verify(two, r2.solution->plan, r2.solution->tree).accepted);
}

TEST_CASE("plan: unsolvable and limits") {
  const GroundModel verbatim = ground_corpus("transport.hddl", "transport-p-verbatim.hddl", false);
  const auto r = plan(verbatim);
  CHECK(r.outcome == Outcome::ProvenUnsolvable);
  CHECK(r.reason == "proven unsolvable");
  CHECK_FALSE(r.stats.budget_hit);

  const GroundModel one = ground_corpus("transport.hddl", "transport-1pkg.hddl");
  SearchLimits tiny;
  tiny.node_budget = 1;
  const auto b = plan(one, tiny);
  CHECK(b.outcome == Outcome::UnsolvableWithinLimits);
  CHECK(b.stats.budget_hit);
  CHECK(b.reason == "node budget exhausted");

  SearchLimits short_plans;
  short_plans.max_plan_length = 3;
  const auto s = plan(one, short_plans);
  CHECK(s.outcome == Outcome::UnsolvableWithinLimits);
  CHECK(s.reason == "search limits");
  CHECK_FALSE(s.stats.budget_hit);

  const GroundModel empty = ground_corpus("empty-domain.hddl", "empty-problem.hddl");
  const auto e = plan(empty);
  REQUIRE(e.outcome == Outcome::Solved);
  CHECK(e.solution->plan.steps.empty());
  CHECK(e.stats.nodes_expanded == 1);

  // Finite hierarchy with no way to satisfy the goal: exhausted, not cut.
  auto m = model::analyze(
      syntax::parse_domain_text("(define (domain d) (:requirements :htn :negative-preconditions) "
                                "(:predicates (p) (q)) (:task t :parameters ()) "
                                "(:method m :parameters () :task (t) :subtasks (a)) "
                                "(:action a :parameters () :precondition (not (q)) :effect (p)) "
                                "(:action b :parameters () :effect (q)))"),
      syntax::parse_problem_text("(define (problem x) (:domain d) (:htn :tasks (t)) (:init) (:goal (q)))"));
  REQUIRE(m.model);
  const auto f = plan(grounding::ground(*m.model, {true, false}));
  CHECK(f.outcome == Outcome::ProvenUnsolvable);
}

TEST_CASE("plan: corpus runs verify, with and without duplicate detection") {
  for (const auto &[d, p] : hddl_test::corpus_pairs()) {
    CAPTURE(d);
    CAPTURE(p);
    const GroundModel g = ground_corpus(d, p);
    SearchLimits on, off;
    off.duplicate_detection = false;
    const auto a = plan(g, on);
    const auto b = plan(g, off);
    CHECK(a.outcome == b.outcome);
    CHECK(a.solution.has_value() == b.solution.has_value());
    if (a.solution && b.solution)
      CHECK(a.solution->plan.steps.size() == b.solution->plan.steps.size());
    if (a.solution)
      CHECK(verification::verify(g, a.solution->plan, a.solution->tree).accepted);

    const auto oracle = verification::enumerate_solutions(g, 10, 10);
    if (oracle.complete)
      CHECK(a.solution.has_value() == !oracle.solutions.empty());
  }
}

TEST_CASE("plan: method preconditions hold where the compiled action runs") {
  const GroundModel g = ground_corpus("method-prec-domain.hddl", "method-prec-problem.hddl");
  const auto r = plan(g);
  REQUIRE(r.outcome == Outcome::Solved);
  const auto text = verification::write_witness(g, r.solution->plan, r.solution->tree);
  // The guard runs before clear-flag removes (flag).
  CHECK(text.find("0 __prec_m-guarded") == 4);
  CHECK(text.find("clear-flag") > text.find("__prec_m-guarded"));
}
