#include "hddl/model/formula.hpp"

namespace hddl::model {

namespace {

void collect_free(const Formula &f, std::set<std::string> &bound, std::set<std::string> &out) {
  auto term = [&](const Term &t) {
    if (t.is_variable() && !bound.count(t.name))
      out.insert(t.name);
  };
  switch (f.kind) {
  case Formula::Kind::Atom:
    for (const auto &t : f.atom.args)
      term(t);
    break;
  case Formula::Kind::Equals:
    for (const auto &t : f.terms)
      term(t);
    break;
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    std::set<std::string> inner = bound;
    for (const auto &v : f.bound)
      inner.insert(v.name);
    collect_free(f.children[0], inner, out);
    break;
  }
  default:
    for (const auto &c : f.children)
      collect_free(c, bound, out);
  }
}

} // namespace

std::set<std::string> free_variables(const Formula &f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

Term substitute(const Term &t, const Substitution &sub, const TypeHierarchy &h) {
  if (!t.is_variable())
    return t;
  auto it = sub.find(t.name);
  if (it == sub.end())
    return t;
  return Term::constant_term(h.constant_name(it->second), it->second);
}

Atom substitute(const Atom &a, const Substitution &sub, const TypeHierarchy &h) {
  Atom out{a.predicate, {}};
  for (const auto &t : a.args)
    out.args.push_back(substitute(t, sub, h));
  return out;
}

Formula substitute(const Formula &f, const Substitution &sub, const TypeHierarchy &h) {
  Formula out = f;
  switch (f.kind) {
  case Formula::Kind::Atom:
    out.atom = substitute(f.atom, sub, h);
    break;
  case Formula::Kind::Equals:
    for (auto &t : out.terms)
      t = substitute(t, sub, h);
    break;
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    Substitution inner = sub;
    for (const auto &v : f.bound)
      inner.erase(v.name);
    out.children[0] = substitute(f.children[0], inner, h);
    break;
  }
  default:
    for (auto &c : out.children)
      c = substitute(c, sub, h);
  }
  return out;
}

std::string to_string(const Term &t) { return t.is_variable() ? "?" + t.name : t.name; }

std::string to_string(const Atom &a) {
  std::string out = "(" + a.predicate;
  for (const auto &t : a.args)
    out += " " + to_string(t);
  return out + ")";
}

std::string to_string(const Formula &f, const TypeHierarchy &h) {
  auto list = [&](const char *head) {
    std::string out = std::string("(") + head;
    for (const auto &c : f.children)
      out += " " + to_string(c, h);
    return out + ")";
  };
  switch (f.kind) {
  case Formula::Kind::True:
    return "()";
  case Formula::Kind::False:
    return "(or)";
  case Formula::Kind::Atom:
    return to_string(f.atom);
  case Formula::Kind::Equals:
    return "(= " + to_string(f.terms[0]) + " " + to_string(f.terms[1]) + ")";
  case Formula::Kind::Not:
    return list("not");
  case Formula::Kind::And:
    return list("and");
  case Formula::Kind::Or:
    return list("or");
  case Formula::Kind::Imply:
    return list("imply");
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    std::string out = f.kind == Formula::Kind::Exists ? "(exists (" : "(forall (";
    for (std::size_t i = 0; i < f.bound.size(); ++i)
      out += (i ? " ?" : "?") + f.bound[i].name + " - " + h.type_name(f.bound[i].type);
    return out + ") " + to_string(f.children[0], h) + ")";
  }
  }
  return "()";
}

} // namespace hddl::model
