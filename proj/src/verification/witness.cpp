#include <algorithm>
#include <cctype>
#include <sstream>

#include "hddl/diagnostics.hpp"
#include "hddl/verification/verify.hpp"

namespace hddl::verification {

namespace {

std::vector<std::string> split(const std::string &line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;)
    out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void malformed(std::string_view file, int line, const std::string &msg) {
  Diagnostic d;
  d.code = "malformed-witness";
  d.message = msg;
  d.span.file = std::string(file);
  d.span.start_line = d.span.end_line = line;
  throw DiagnosticError(d);
}

std::string task_text(const GroundModel &g, TaskIdx t) {
  const auto &task = g.tasks[t];
  std::string out = task.name;
  for (auto c : task.args)
    out += " " + g.types().constant_name(c);
  return out;
}

} // namespace

Witness parse_witness(std::string_view text, std::string_view file) {
  Witness w;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool open = false, closed = false, seen_root = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split(line);
    if (!open) {
      if (toks.size() == 1 && toks[0] == "==>")
        open = true;
      continue;
    }
    if (toks.empty())
      continue;
    if (toks.size() == 1 && toks[0] == "<==") {
      closed = true;
      break;
    }
    if (toks[0] == "root") {
      if (seen_root)
        malformed(file, lineno, "second root line");
      seen_root = true;
      w.roots.assign(toks.begin() + 1, toks.end());
      w.root_line = lineno;
      continue;
    }
    const auto arrow = std::find(toks.begin(), toks.end(), "->");
    if (arrow == toks.end()) {
      if (toks.size() < 2)
        malformed(file, lineno, "action line needs an id and an action name");
      Witness::Action a;
      a.id = toks[0];
      a.name = lower(toks[1]);
      for (auto it = toks.begin() + 2; it != toks.end(); ++it)
        a.args.push_back(lower(*it));
      a.line = lineno;
      w.actions.push_back(std::move(a));
      continue;
    }
    if (std::find(arrow + 1, toks.end(), "->") != toks.end())
      malformed(file, lineno, "more than one '->'");
    if (arrow - toks.begin() < 2)
      malformed(file, lineno, "node line needs an id and a task before '->'");
    if (arrow + 1 == toks.end())
      malformed(file, lineno, "node line needs a method name after '->'");
    Witness::Node n;
    n.id = toks[0];
    n.task = lower(toks[1]);
    for (auto it = toks.begin() + 2; it != arrow; ++it)
      n.args.push_back(lower(*it));
    n.method = lower(*(arrow + 1));
    n.children.assign(arrow + 2, toks.end());
    n.line = lineno;
    w.nodes.push_back(std::move(n));
  }
  if (!open)
    malformed(file, lineno, "missing '==>'");
  if (!closed)
    malformed(file, lineno, "missing '<=='");
  return w;
}

std::string write_witness(const GroundModel &g, const Plan &plan, const DecompositionTree &tree) {
  std::map<TaskId, std::string> number;
  for (std::size_t k = 0; k < plan.steps.size(); ++k)
    number[plan.steps[k]] = std::to_string(k);
  std::size_t next = plan.steps.size();
  std::vector<TaskId> preorder;
  std::vector<TaskId> stack(tree.roots.rbegin(), tree.roots.rend());
  while (!stack.empty()) {
    TaskId id = stack.back();
    stack.pop_back();
    const auto &node = tree.nodes.at(id);
    if (!node.method)
      continue;
    preorder.push_back(id);
    number[id] = std::to_string(next++);
    stack.insert(stack.end(), node.children.rbegin(), node.children.rend());
  }

  std::ostringstream out;
  out << "==>\n";
  for (std::size_t k = 0; k < plan.steps.size(); ++k)
    out << k << ' ' << task_text(g, tree.nodes.at(plan.steps[k]).task) << '\n';
  out << "root";
  for (const auto &r : tree.roots)
    out << ' ' << number.at(r);
  out << '\n';
  for (const auto &id : preorder) {
    const auto &node = tree.nodes.at(id);
    out << number.at(id) << ' ' << task_text(g, node.task) << " -> " << g.methods[*node.method].name;
    for (const auto &c : node.children)
      out << ' ' << number.at(c);
    out << '\n';
  }
  out << "<==\n";
  return out.str();
}

const char *to_string(Stage s) {
  switch (s) {
  case Stage::Parse:
    return "parse";
  case Stage::Mapping:
    return "mapping";
  case Stage::Method:
    return "method";
  case Stage::Ordering:
    return "ordering";
  case Stage::Executability:
    return "executability";
  case Stage::Goal:
    return "goal";
  }
  return "?";
}

} // namespace hddl::verification
