#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("hddl-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run_cli(const std::string &args, const std::string &env = "") {
  const auto out = scratch() / "stdout", err = scratch() / "stderr";
  const std::string cmd =
      env + " " HDDL_CLI " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, hddl_test::read_file(out), hddl_test::read_file(err)};
}

std::string c(const std::string &name) { return hddl_test::corpus_path(name); }

std::string put(const std::string &name, const std::string &text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::size_t count_action_lines(const std::string &witness) {
  std::istringstream in(witness);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0])) && line.find("->") == std::string::npos)
      ++n;
  return n;
}

} // namespace

TEST_CASE("validate") {
  CHECK(run_cli("validate " + c("transport.hddl") + " " + c("transport-1pkg.hddl")).code == 0);
  CHECK(run_cli("validate " + c("missing.hddl") + " " + c("transport-1pkg.hddl")).code == 2);
  const auto prob = put("noflag-p.hddl", "(define (problem p) (:domain noflag) (:init))");
  const auto r = run_cli("validate --strict-requirements " + c("invalid/method-prec-no-flag.hddl") + " " + prob);
  CHECK(r.code == 3);
  CHECK(r.err.find("missing-requirement") != std::string::npos);
  CHECK(run_cli("validate " + c("invalid/illegal-char.hddl") + " " + prob).code == 3);
  const auto json = run_cli("validate --json " + c("invalid/illegal-char.hddl") + " " + prob);
  CHECK(json.err.rfind("{\"code\":", 0) == 0);
  CHECK(run_cli("validate " + c("transport.hddl")).code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("ground") {
  const auto r = run_cli("ground " + c("transport.hddl") + " " + c("transport-2pkg.hddl") + " --no-prune");
  CHECK(r.code == 0);
  CHECK(r.out.find("action drive[c0,c1]") != std::string::npos);
  CHECK(run_cli("ground " + c("transport.hddl") + " " + c("transport-1pkg.hddl") + " --no-compile-method-prec").code ==
        3);
  CHECK(run_cli("ground " + c("transport.hddl") + " " + c("transport-2pkg.hddl") + " --max-instances 5").code == 4);
}

TEST_CASE("plan and verify") {
  const auto w1 = (scratch() / "w1.txt").string();
  auto r = run_cli("plan " + c("transport.hddl") + " " + c("transport-1pkg.hddl") + " -o " + w1);
  CHECK(r.code == 0);
  const std::string witness = hddl_test::read_file(w1);
  CHECK(count_action_lines(witness) == 4);
  CHECK(run_cli("verify " + c("transport.hddl") + " " + c("transport-1pkg.hddl") + " " + w1).code == 0);

  // Bit-stable output; with --quiet standard output holds only the witness.
  r = run_cli("plan --quiet --stats " + c("transport.hddl") + " " + c("transport-1pkg.hddl"));
  CHECK(r.code == 0);
  CHECK(r.out == witness);
  CHECK(r.err.find("nodes_expanded=") != std::string::npos);

  r = run_cli("plan --exhaustive " + c("transport.hddl") + " " + c("transport-p-verbatim.hddl"));
  CHECK(r.code == 1);
  CHECK(r.out.find("proven unsolvable") != std::string::npos);
  r = run_cli("plan --node-budget 1 " + c("transport.hddl") + " " + c("transport-1pkg.hddl"));
  CHECK(r.code == 1);
  CHECK(r.out.find("budget") != std::string::npos);

  std::string shuffled = witness;
  const auto a = shuffled.find("0 drive c0 c1\n"), b = shuffled.find("1 pick-up c1 p0\n");
  shuffled = shuffled.substr(0, a) + "1 pick-up c1 p0\n0 drive c0 c1\n" + shuffled.substr(b + 16);
  r = run_cli("verify " + c("transport.hddl") + " " + c("transport-1pkg.hddl") + " " + put("shuffled.txt", shuffled));
  CHECK(r.code == 1);
  CHECK(r.out.find("stage=ordering") != std::string::npos);

  const auto bad = put("bad.txt", "==>\n0 drive c0 c1\n");
  CHECK(run_cli("verify " + c("transport.hddl") + " " + c("transport-1pkg.hddl") + " " + bad).code == 3);
  CHECK(run_cli("verify " + c("transport.hddl") + " " + c("transport-1pkg.hddl") + " " + c("nope.txt")).code == 2);
  CHECK(run_cli("verify " + c("empty-domain.hddl") + " " + c("empty-problem.hddl") + " " +
             put("empty.txt", "==>\n<==\n"))
            .code == 0);
}

TEST_CASE("fmt") {
  const auto f = put("fmt.hddl", hddl_test::corpus("transport.hddl"));
  CHECK(run_cli("fmt " + f).code == 0);
  const std::string once = hddl_test::read_file(f);
  CHECK(run_cli("fmt " + f).code == 0);
  CHECK(hddl_test::read_file(f) == once);
  CHECK(run_cli("fmt " + f + " -o -").out == once);

  const std::string broken = "(define (domain d)\n  (:predicates (p ?x - object)\n";
  const auto g = put("broken.hddl", broken);
  CHECK(run_cli("fmt " + g).code == 3);
  CHECK(hddl_test::read_file(g) == broken);
}

TEST_CASE("colour follows HDDL_COLOR") {
  const auto prob = put("noflag-p2.hddl", "(define (problem p) (:domain noflag) (:init))");
  const std::string args = "validate " + c("invalid/illegal-char.hddl") + " " + prob;
  CHECK(run_cli(args, "HDDL_COLOR=1").err.find("\033[") != std::string::npos);
  CHECK(run_cli(args, "HDDL_COLOR=0").err.find("\033[") == std::string::npos);
}
