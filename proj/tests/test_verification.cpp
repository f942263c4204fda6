#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hddl/verification/verify.hpp"
#include "decomposition_reference.hpp"
#include "test_support.hpp"

using namespace hddl;
using namespace hddl::verification;
using grounding::GroundModel;

namespace {

GroundModel ground_corpus(const std::string &d, const std::string &p) {
  return grounding::ground(model::compile_method_preconditions(hddl_test::load_model(d, p)));
}

Verdict check(const GroundModel &g, const std::string &text) { return verify_witness(g, parse_witness(text)); }

std::string stage(const Verdict &v) { return v.accepted ? "accepted" : to_string(v.failure->stage); }

const char *kOnePackage = R"(some planner banner
==>
0 drive c0 c1
1 pick-up c1 p0
2 drive c1 c0
3 drop c0 p0
root 4
4 deliver p0 c0 -> m-deliver 5 1 6 3
5 get-to c1 -> m-direct 0
6 get-to c0 -> m-direct 2
<==
)";

} // namespace

TEST_CASE("decompose_step: examples") {
  GroundMethod empty;
  empty.key = "m-already-there[c1]";
  empty.task = 7;
  GroundNetwork chain;
  chain.add("i0", 1);
  chain.add("i1", 7);
  chain.add("i2", 2);
  chain.order = {{"i0", "i1"}, {"i1", "i2"}, {"i0", "i2"}};
  const auto a = decompose_step(chain, "i1", empty);
  CHECK(a.ids == std::vector<TaskId>{"i0", "i2"});
  CHECK(a.order == model::OrderRelation{{"i0", "i2"}});

  GroundMethod seq;
  seq.key = "m";
  seq.task = 7;
  seq.network.add("a", 1);
  seq.network.add("b", 2);
  seq.network.order = {{"a", "b"}};
  GroundNetwork sole;
  sole.add("r", 7);
  const auto b = decompose_step(sole, "r", seq, {{"a", "a"}, {"b", "b"}});
  CHECK(b.ids == std::vector<TaskId>{"a", "b"});
  CHECK(b.order == model::OrderRelation{{"a", "b"}});

  GroundMethod par = seq;
  par.network.order.clear();
  GroundNetwork two;
  two.add("i0", 1);
  two.add("i1", 7);
  two.order = {{"i0", "i1"}};
  const auto c = decompose_step(two, "i1", par, {{"a", "a"}, {"b", "b"}});
  CHECK(c.order == model::OrderRelation{{"i0", "a"}, {"i0", "b"}});

  CHECK_THROWS_AS(decompose_step(two, "zz", par), DecompositionError);
  CHECK_THROWS_AS(decompose_step(two, "i0", par), DecompositionError);
  CHECK_THROWS_AS(decompose_step(two, "i1", par, {{"a", "i0"}, {"b", "b"}}), DecompositionError);
  CHECK_THROWS_AS(decompose_step(two, "i1", par, {{"a", "x"}, {"b", "x"}}), DecompositionError);
  CHECK_THROWS_AS(decompose_step(two, "i1", par, {{"a", "x"}}), DecompositionError);
}

TEST_CASE("decompose_step matches the set formula and keeps a strict partial order") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    GroundNetwork tn;
    const int n = 1 + rng() % 6;
    for (int k = 0; k < n; ++k)
      tn.add("t" + std::to_string(k), static_cast<int>(rng() % 3));
    model::OrderRelation r;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (rng() % 3 == 0)
          r.emplace(tn.ids[j], tn.ids[k]);
    tn.order = model::transitive_closure(r);
    const TaskId i = tn.ids[rng() % n];

    GroundMethod gm;
    gm.key = "m";
    gm.task = tn.label(i);
    const int m = rng() % 4;
    for (int k = 0; k < m; ++k)
      gm.network.add("s" + std::to_string(k), static_cast<int>(rng() % 3));
    model::OrderRelation mr;
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        if (rng() % 2)
          mr.emplace(gm.network.ids[j], gm.network.ids[k]);
    gm.network.order = model::transitive_closure(mr);
    std::map<TaskId, TaskId> ren;
    for (const auto &x : gm.network.ids)
      ren[x] = i + "/" + x;

    const auto got = decompose_step(tn, i, gm, ren);
    const auto want = hddl_test::reference_step(tn, i, gm, ren);
    CHECK(got.alpha == want.alpha);
    CHECK(got.order == want.order);
    CHECK(model::is_strict_partial_order(got.ids, got.order));
  }
}

TEST_CASE("witness parsing") {
  const auto w = parse_witness(kOnePackage);
  CHECK(w.actions.size() == 4);
  CHECK(w.roots == std::vector<std::string>{"4"});
  REQUIRE(w.nodes.size() == 3);
  CHECK(w.nodes[0].method == "m-deliver");
  CHECK(w.nodes[0].children == std::vector<std::string>{"5", "1", "6", "3"});
  CHECK(w.nodes[1].line == 9);

  auto code = [](const std::string &text) {
    try {
      parse_witness(text);
    } catch (const DiagnosticError &e) {
      return e.diagnostic().code;
    }
    return std::string("ok");
  };
  CHECK(code("==>\n<==\n") == "ok");
  CHECK(code("0 drive c0 c1\n") == "malformed-witness");
  CHECK(code("==>\n0 drive c0 c1\n") == "malformed-witness");
  CHECK(code("==>\nroot\nroot\n<==") == "malformed-witness");
  CHECK(code("==>\n4 deliver -> \n<==") == "malformed-witness");
  CHECK(code("==>\n4 -> m 1\n<==") == "malformed-witness");
  CHECK(code("==>\n7\n<==") == "malformed-witness");
}

TEST_CASE("verify: transport examples") {
  const GroundModel g = ground_corpus("transport.hddl", "transport-1pkg.hddl");
  CHECK(stage(check(g, kOnePackage)) == "accepted");

  std::string swapped = kOnePackage;
  swapped.replace(swapped.find("0 drive c0 c1"), 13, "0 pick-up c1 p0");
  swapped.replace(swapped.find("1 pick-up c1 p0"), 15, "1 drive c0 c1");
  CHECK(stage(check(g, swapped)) == "method"); // children no longer fit m-deliver

  // Same actions, lines swapped: the tree's order is violated.
  const char *reordered = "==>\n1 pick-up c1 p0\n0 drive c0 c1\n2 drive c1 c0\n3 drop c0 p0\nroot 4\n"
                          "4 deliver p0 c0 -> m-deliver 5 1 6 3\n5 get-to c1 -> m-direct 0\n"
                          "6 get-to c0 -> m-direct 2\n<==";
  const auto v = check(g, reordered);
  CHECK(stage(v) == "ordering");
  CHECK(v.failure->location == "step 0");

  const char *dropped = "==>\n0 drive c0 c1\n1 pick-up c1 p0\n3 drop c0 p0\nroot 4\n"
                        "4 deliver p0 c0 -> m-deliver 5 1 6 3\n5 get-to c1 -> m-direct 0\n"
                        "6 get-to c0 -> m-direct 2\n<==";
  CHECK(stage(check(g, dropped)) == "mapping");
  const char *duplicated = "==>\n0 drive c0 c1\n1 pick-up c1 p0\n2 drive c1 c0\n3 drop c0 p0\n7 drop c0 p0\n"
                           "root 4\n4 deliver p0 c0 -> m-deliver 5 1 6 3\n5 get-to c1 -> m-direct 0\n"
                           "6 get-to c0 -> m-direct 2\n<==";
  CHECK(stage(check(g, duplicated)) == "mapping");
  const char *wrong_method = "==>\n0 drive c0 c1\n1 pick-up c1 p0\n2 drive c1 c0\n3 drop c0 p0\nroot 4\n"
                             "4 deliver p0 c0 -> m-deliver 5 1 6 3\n5 get-to c1 -> m-already-there 0\n"
                             "6 get-to c0 -> m-direct 2\n<==";
  CHECK(stage(check(g, wrong_method)) == "method");
  const char *wrong_root = "==>\n0 drive c0 c1\n1 pick-up c1 p0\n2 drive c1 c0\n3 drop c0 p0\nroot 4\n"
                           "4 deliver p0 c2 -> m-deliver 5 1 6 3\n5 get-to c1 -> m-direct 0\n"
                           "6 get-to c2 -> m-direct 2\n<==";
  CHECK(stage(check(g, wrong_root)) == "mapping"); // deliver[p0,c2] was pruned
  const char *cycle = "==>\nroot 4\n4 deliver p0 c0 -> m-deliver 5\n5 get-to c1 -> m-direct 6\n"
                      "6 get-to c1 -> m-direct 5\n<==";
  CHECK(stage(check(g, cycle)) == "mapping");

  const GroundModel g_any = grounding::ground(
      model::compile_method_preconditions(hddl_test::load_model("transport.hddl", "transport-1pkg.hddl")),
      {true, false});
  const char *late = "==>\n0 drive c0 c1\n1 pick-up c1 p0\n2 drive c1 c0\n3 drive c0 c1\n4 drop c1 p0\nroot 5\n"
                     "5 deliver p0 c1 -> m-deliver 6 1 7 4\n6 get-to c1 -> m-direct 0\n"
                     "7 get-to c1 -> m-drive-to-via 8 3\n8 get-to c0 -> m-direct 2\n<==";
  CHECK(stage(check(g_any, late)) == "method"); // roots: tn_I asks for deliver p0 c0

  const GroundModel goal = ground_corpus("transport.hddl", "transport-goal.hddl");
  CHECK(stage(check(goal, kOnePackage)) == "accepted");
}

TEST_CASE("verify: executability and goal stages") {
  const GroundModel g = ground_corpus("counter-domain.hddl", "counter-problem.hddl");
  const char *good = "==>\n0 __prec_m-reached n0\n1 inc n0 n1\n2 inc n1 n2\nroot 3\n"
                     "3 reach n2 -> m-step 4 2\n4 reach n1 -> m-step 5 1\n5 reach n0 -> m-reached 0\n<==";
  CHECK(stage(check(g, good)) == "accepted");
  const char *bad = "==>\n0 __prec_m-reached n1\n1 inc n1 n2\nroot 2\n"
                    "2 reach n2 -> m-step 3 1\n3 reach n1 -> m-reached 0\n<==";
  const auto v = check(g, bad);
  CHECK(stage(v) == "executability");
  CHECK(v.failure->location == "step 0");
  CHECK(v.failure->detail.find("(value n1)") != std::string::npos);

  auto r = model::analyze(
      syntax::parse_domain_text("(define (domain d) (:requirements :htn) (:predicates (p)) "
                                "(:task t :parameters ()) (:method m :parameters () :task (t) :subtasks (a)) "
                                "(:action a :parameters ()))"),
      syntax::parse_problem_text("(define (problem q) (:domain d) (:htn :tasks (t)) (:init) (:goal (p)))"));
  REQUIRE(r.model);
  const GroundModel unreachable = grounding::ground(*r.model);
  CHECK(stage(check(unreachable, "==>\n0 a\nroot 1\n1 t -> m 0\n<==")) == "goal");
  const GroundModel empty = ground_corpus("empty-domain.hddl", "empty-problem.hddl");
  CHECK(stage(check(empty, "==>\n<==\n")) == "accepted");
  CHECK(stage(check(empty, "==>\nroot\n<==\n")) == "accepted");
}

TEST_CASE("verify: ordering containment direction") {
  const GroundModel g = ground_corpus("shop-order-domain.hddl", "shop-order-problem.hddl");
  // t1<t4, t2<t4, t2<t5, t3<t5; a3 needs done4 false.
  auto witness = [](const std::vector<std::string> &order) {
    std::string w = "==>\n";
    for (std::size_t k = 0; k < order.size(); ++k)
      w += order[k] + " " + order[k] + "\n";
    return w + "root w\nw work -> m-work a1 a2 a3 a4 a5\n<==\n";
  };
  CHECK(stage(check(g, witness({"a1", "a2", "a3", "a4", "a5"}))) == "accepted");
  CHECK(stage(check(g, witness({"a3", "a2", "a5", "a1", "a4"}))) == "accepted");
  CHECK(stage(check(g, witness({"a4", "a1", "a2", "a3", "a5"}))) == "ordering");
  CHECK(stage(check(g, witness({"a1", "a2", "a4", "a3", "a5"}))) == "executability");
}

TEST_CASE("enumerate_solutions: transport") {
  const GroundModel one = ground_corpus("transport.hddl", "transport-1pkg.hddl");
  const auto r = enumerate_solutions(one, 10, 4);
  CHECK(r.complete);
  REQUIRE(r.solutions.size() == 1);
  CHECK(write_witness(one, r.solutions[0].plan, r.solutions[0].tree) ==
        "==>\n0 drive c0 c1\n1 pick-up c1 p0\n2 drive c1 c0\n3 drop c0 p0\nroot 4\n"
        "4 deliver p0 c0 -> m-deliver 5 1 6 3\n5 get-to c1 -> m-direct 0\n6 get-to c0 -> m-direct 2\n<==\n");
  CHECK(enumerate_solutions(one, 10, 3).solutions.empty());

  const auto wide = enumerate_solutions(one, 10, 10);
  CHECK(wide.complete);
  CHECK(wide.solutions.size() > 1);
  std::size_t shortest = 100;
  for (const auto &s : wide.solutions) {
    CHECK(verify(one, s.plan, s.tree).accepted);
    shortest = std::min(shortest, s.plan.steps.size());
  }
  CHECK(shortest == 4);

  const GroundModel two = ground_corpus("transport.hddl", "transport-2pkg.hddl");
  CHECK(enumerate_solutions(two, 10, 7).solutions.empty());
  const auto eight = enumerate_solutions(two, 10, 8);
  CHECK_FALSE(eight.solutions.empty());
  for (const auto &s : eight.solutions)
    CHECK(verify(two, s.plan, s.tree).accepted);
  const auto serial = enumerate_solutions(two, 10, 8, 1'000'000, false);
  REQUIRE(serial.solutions.size() == eight.solutions.size());
  for (std::size_t k = 0; k < serial.solutions.size(); ++k)
    CHECK(write_witness(two, serial.solutions[k].plan, serial.solutions[k].tree) ==
          write_witness(two, eight.solutions[k].plan, eight.solutions[k].tree));

  const GroundModel verbatim = grounding::ground(
      model::compile_method_preconditions(hddl_test::load_model("transport.hddl", "transport-p-verbatim.hddl")),
      {true, false});
  CHECK(enumerate_solutions(verbatim, 10, 10).solutions.empty());

  const GroundModel empty = ground_corpus("empty-domain.hddl", "empty-problem.hddl");
  const auto e = enumerate_solutions(empty, 10, 10);
  REQUIRE(e.solutions.size() == 1);
  CHECK(e.solutions[0].plan.steps.empty());

  const auto capped = enumerate_solutions(two, 10, 10, 5);
  CHECK_FALSE(capped.complete);
}

TEST_CASE("witness round trip through text") {
  const GroundModel two = ground_corpus("transport.hddl", "transport-2pkg.hddl");
  const auto r = enumerate_solutions(two, 10, 9);
  REQUIRE(r.solutions.size() > 2);
  for (const auto &s : r.solutions) {
    const std::string text = write_witness(two, s.plan, s.tree);
    CHECK(check(two, text).accepted);
    auto back = resolve_witness(two, parse_witness(text));
    REQUIRE(std::holds_alternative<Resolved>(back));
    const auto &res = std::get<Resolved>(back);
    CHECK(write_witness(two, res.plan, res.tree) == text);
  }
}
