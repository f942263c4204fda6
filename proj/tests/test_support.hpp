#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hddl/model/model.hpp"
#include "hddl/syntax/parser.hpp"

namespace hddl_test {

inline std::string corpus_path(const std::string &name) {
  return std::string(HDDL_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus(const std::string &name) {
  return read_file(corpus_path(name));
}

/// Every valid corpus file (the `invalid/` subdirectory excluded), sorted.
inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto &entry : std::filesystem::directory_iterator(HDDL_CORPUS_DIR))
    if (entry.is_regular_file() && entry.path().extension() == ".hddl")
      out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

/// Parses and analyzes a corpus domain/problem pair.
inline hddl::model::AnalysisResult analyze_corpus(const std::string &domain,
                                                  const std::string &problem,
                                                  hddl::model::AnalyzeOptions opt = {}) {
  return hddl::model::analyze(hddl::syntax::parse_domain_text(corpus(domain), domain),
                              hddl::syntax::parse_problem_text(corpus(problem), problem), opt);
}

/// Like analyze_corpus but requires success.
inline hddl::model::Model load_model(const std::string &domain, const std::string &problem) {
  auto r = analyze_corpus(domain, problem);
  if (!r.model) {
    std::string msg = "analysis failed:";
    for (const auto &d : r.diagnostics)
      msg += "\n" + hddl::format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return *r.model;
}

/// Every valid domain/problem pair of the corpus.
inline std::vector<std::pair<std::string, std::string>> corpus_pairs() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto &f : corpus_files()) {
    const auto dash = f.rfind("-problem.hddl");
    if (dash != std::string::npos && dash + 13 == f.size())
      out.emplace_back(f.substr(0, dash) + "-domain.hddl", f);
  }
  for (const auto *p : {"transport-1pkg.hddl", "transport-2pkg.hddl", "transport-aliases.hddl",
                        "transport-goal.hddl", "transport-htn-params.hddl", "transport-p-verbatim.hddl"})
    out.emplace_back("transport.hddl", p);
  out.emplace_back("transport-deliver-verbatim.hddl", "transport-1pkg.hddl");
  return out;
}

} // namespace hddl_test
