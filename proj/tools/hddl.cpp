// hddl: validate, ground, plan, verify and format HDDL files.
//
// Exit codes: 0 success, 1 rejected or no plan, 2 usage or unreadable
// file, 3 parse or semantic error, 4 internal limit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "hddl/planner/planner.hpp"
#include "hddl/syntax/emitter.hpp"
#include "hddl/syntax/parser.hpp"

using namespace hddl;

namespace {

enum Exit { kOk = 0, kRejected = 1, kUsage = 2, kInput = 3, kLimit = 4 };

struct Options {
  bool strict = false;
  bool no_prune = false;
  bool compile_prec = true;
  bool exhaustive = false;
  bool stats = false;
  bool quiet = false;
  bool json = false;
  std::string output;
  std::string emit_ground;
  std::size_t max_instances = grounding::GroundOptions{}.max_instances;
  std::string problem_path;
  planner::SearchLimits limits;
  double time_budget_s = 60;
};

/// Reports that are not the primary output; standard error under --quiet.
std::ostream &info(const Options &o) { return o.quiet ? std::cerr : std::cout; }

bool color() {
  if (const char *env = std::getenv("HDDL_COLOR"))
    return std::string(env) == "1";
  return isatty(STDERR_FILENO);
}

void report(const Diagnostic &d, const Options &o) {
  if (o.json)
    std::cerr << diagnostic_json(d) << '\n';
  else
    std::cerr << format_diagnostic(d, color()) << '\n';
}

class ExitWith : public std::exception {
public:
  explicit ExitWith(int code) : code(code) {}
  int code;
};

std::string read(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << '\n';
    throw ExitWith(kUsage);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write " << path << '\n';
    throw ExitWith(kUsage);
  }
}

model::Model load(const std::string &domain, const std::string &problem, const Options &o) {
  const std::string dtext = read(domain), ptext = read(problem);
  try {
    auto result = model::analyze(syntax::parse_domain_text(dtext, domain),
                                 syntax::parse_problem_text(ptext, problem), {o.strict});
    for (const auto &d : result.diagnostics)
      report(d, o);
    if (!result.model)
      throw ExitWith(kInput);
    return o.compile_prec ? model::compile_method_preconditions(*result.model) : *result.model;
  } catch (const DiagnosticError &e) {
    report(e.diagnostic(), o);
    throw ExitWith(kInput);
  }
}

grounding::GroundModel ground(const model::Model &m, const Options &o) {
  try {
    grounding::GroundOptions go;
    go.prune = !o.no_prune;
    go.max_instances = o.max_instances;
    auto g = grounding::ground(m, go);
    if (!o.emit_ground.empty())
      write(o.emit_ground, grounding::ground_listing(g));
    return g;
  } catch (const DiagnosticError &e) {
    Diagnostic d = e.diagnostic();
    if (d.span.file.empty())
      d.span.file = o.problem_path;
    report(d, o);
    const auto &code = e.diagnostic().code;
    throw ExitWith(code == "ground-limit" ? kLimit : code == "ground-infeasible" ? kRejected : kInput);
  }
}

void emit(const std::string &text, const Options &o) {
  if (o.output.empty())
    std::cout << text;
  else
    write(o.output, text);
}

int cmd_validate(const std::string &d, const std::string &p, const Options &o) {
  const auto m = load(d, p, o);
  info(o) << "valid: " << m.domain_name << " / " << m.problem_name << '\n';
  return kOk;
}

int cmd_ground(const std::string &d, const std::string &p, const Options &o) {
  const auto g = ground(load(d, p, o), o);
  emit(grounding::ground_listing(g), o);
  return kOk;
}

int cmd_plan(const std::string &d, const std::string &p, Options o) {
  const auto g = ground(load(d, p, o), o);
  if (o.exhaustive) {
    o.limits.node_budget = planner::kUnbounded;
    o.limits.time_budget = std::chrono::milliseconds::max();
  } else {
    o.limits.time_budget = std::chrono::milliseconds(static_cast<long long>(o.time_budget_s * 1000));
  }
  const auto r = planner::plan(g, o.limits);
  if (o.stats)
    info(o) << planner::to_string(r.stats);
  if (!r.solution) {
    info(o) << "no plan: " << r.reason << '\n';
    return kRejected;
  }
  const auto v = verification::verify(g, r.solution->plan, r.solution->tree);
  if (!v.accepted) {
    std::cerr << "internal error: plan failed verification at " << to_string(v.failure->stage) << ": "
              << v.failure->detail << '\n';
    return kLimit;
  }
  emit(verification::write_witness(g, r.solution->plan, r.solution->tree), o);
  info(o) << "solved: " << r.solution->plan.steps.size() << " actions, verified\n";
  return kOk;
}

int cmd_verify(const std::string &d, const std::string &p, const std::string &w, const Options &o) {
  const std::string text = read(w);
  const auto g = ground(load(d, p, o), o);
  verification::Witness witness;
  try {
    witness = verification::parse_witness(text, w);
  } catch (const DiagnosticError &e) {
    report(e.diagnostic(), o);
    return kInput;
  }
  const auto v = verification::verify_witness(g, witness);
  if (v.accepted) {
    info(o) << "accepted\n";
    return kOk;
  }
  info(o) << "rejected: stage=" << to_string(v.failure->stage) << ": " << v.failure->detail;
  if (!v.failure->location.empty())
    info(o) << " (" << v.failure->location << ")";
  info(o) << '\n';
  return kRejected;
}

int cmd_fmt(const std::string &path, const Options &o) {
  const std::string text = read(path);
  std::string out;
  try {
    const auto ast = syntax::parse_any_text(text, path);
    out = std::visit([](const auto &a) { return syntax::emit(a); }, ast);
  } catch (const DiagnosticError &e) {
    report(e.diagnostic(), o);
    return kInput;
  }
  if (!o.output.empty() && o.output == "-")
    std::cout << out;
  else if (out != text)
    write(o.output.empty() ? path : o.output, out);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"HDDL toolchain: validate, ground, plan, verify, fmt"};
  app.require_subcommand(1);
  Options o;
  std::string domain, problem, witness, file;
  std::size_t max_depth = 0, max_length = 0;

  auto common = [&](CLI::App *c) {
    c->add_option("domain", domain, "Domain file")->required();
    c->add_option("problem", problem, "Problem file")->required();
    c->add_flag("--strict-requirements", o.strict, "Error on features used without their requirement flag");
    c->add_flag("--json", o.json, "Diagnostics as JSON lines");
    c->add_flag("-q,--quiet", o.quiet, "Send everything but the primary output to standard error");
  };
  auto grounding_flags = [&](CLI::App *c) {
    c->add_flag("--no-prune", o.no_prune, "Keep tasks unreachable from the initial network");
    c->add_flag("--compile-method-prec,!--no-compile-method-prec", o.compile_prec,
                "Compile method preconditions into actions (default on)");
    c->add_option("--emit-ground", o.emit_ground, "Also write the ground model listing to this file");
    c->add_option("--max-instances", o.max_instances, "Grounding limit on enumerated bindings")
        ->check(CLI::PositiveNumber);
  };

  auto *validate = app.add_subcommand("validate", "Parse and check a domain/problem pair");
  common(validate);

  auto *ground_cmd = app.add_subcommand("ground", "Print the ground model");
  common(ground_cmd);
  grounding_flags(ground_cmd);
  ground_cmd->add_option("-o,--output", o.output, "Output file");

  auto *plan = app.add_subcommand("plan", "Search for a plan and print its witness");
  common(plan);
  grounding_flags(plan);
  plan->add_option("-o,--output", o.output, "Witness file");
  plan->add_flag("--stats", o.stats, "Print search statistics as key=value lines");
  plan->add_flag("--exhaustive", o.exhaustive, "No node or time budget");
  plan->add_option("--max-depth", max_depth, "Maximum number of decompositions");
  plan->add_option("--max-length", max_length, "Maximum plan length");
  plan->add_option("--node-budget", o.limits.node_budget, "Maximum expanded nodes")->check(CLI::PositiveNumber);
  plan->add_option("--time-budget", o.time_budget_s, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
  plan->add_flag("--no-duplicate-detection{false}", o.limits.duplicate_detection, "Disable duplicate pruning");

  auto *verify = app.add_subcommand("verify", "Check a plan witness");
  common(verify);
  grounding_flags(verify);
  verify->add_option("witness", witness, "Witness file")->required();

  auto *fmt = app.add_subcommand("fmt", "Rewrite a file in canonical form");
  fmt->add_option("file", file, "Domain or problem file")->required();
  fmt->add_option("-o,--output", o.output, "Write here instead of in place ('-' for standard output)");
  fmt->add_flag("--json", o.json, "Diagnostics as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }
  o.problem_path = problem;
  if (max_depth)
    o.limits.max_decompositions = max_depth;
  if (max_length)
    o.limits.max_plan_length = max_length;

  try {
    if (*validate)
      return cmd_validate(domain, problem, o);
    if (*ground_cmd)
      return cmd_ground(domain, problem, o);
    if (*plan)
      return cmd_plan(domain, problem, o);
    if (*verify)
      return cmd_verify(domain, problem, witness, o);
    if (*fmt)
      return cmd_fmt(file, o);
  } catch (const ExitWith &e) {
    return e.code;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kLimit;
  }
  return kUsage;
}
