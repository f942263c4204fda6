#include "hddl/syntax/parser.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>

namespace hddl::syntax {

namespace {

bool is_subtasks_keyword(const std::string &kw) {
  return kw == "tasks" || kw == "subtasks" || kw == "ordered-tasks" ||
         kw == "ordered-subtasks";
}

bool is_ordering_keyword(const std::string &kw) {
  return kw == "order" || kw == "ordering";
}

class Parser {
public:
  explicit Parser(const std::vector<Token> &tokens) : toks_(tokens) {
    if (toks_.empty() || toks_.back().kind != TokenKind::End)
      throw DiagnosticError(Diagnostic{Severity::Error, "syntax-error",
                                       "token stream is not terminated", {}});
  }

  AstDomain domain() {
    const SourceSpan begin = peek().span;
    expect_header("domain");
    AstDomain d;
    d.name = expect_name("domain name");
    expect(TokenKind::RParen);

    // Position in the `<domain>` production; sections must not go back.
    static const std::vector<std::string> order = {
        "requirements", "types", "constants", "predicates",
        "task",         "method", "action"};
    int last_rank = -1;
    std::string last_section;
    while (peek().kind == TokenKind::LParen) {
      const Token &open = next();
      const Token &kw = expect(TokenKind::Keyword, "domain section keyword");
      const auto it = std::find(order.begin(), order.end(), kw.text);
      if (it == order.end())
        fail(kw, "unknown domain section ':" + kw.text + "'");
      const int rank = static_cast<int>(it - order.begin());
      if (rank < last_rank)
        fail(kw, "section ':" + kw.text + "' must come before ':" +
                     last_section + "'");
      if (rank == last_rank && rank < 4)
        fail(kw, "duplicate section ':" + kw.text + "'");
      last_rank = rank;
      last_section = kw.text;

      switch (rank) {
      case 0:
        d.requirements = requirement_keys();
        break;
      case 1:
        d.types = typed_list(TokenKind::Identifier, true);
        break;
      case 2:
        d.constants = typed_list(TokenKind::Identifier, false);
        break;
      case 3:
        while (peek().kind == TokenKind::LParen)
          d.predicates.push_back(predicate());
        break;
      case 4:
        d.tasks.push_back(task_def(open));
        continue; // task_def consumed the closing paren
      case 5:
        d.methods.push_back(method(open));
        continue;
      case 6:
        d.actions.push_back(action(open));
        continue;
      }
      expect(TokenKind::RParen);
    }
    const Token &close = expect(TokenKind::RParen, "domain section or ')'");
    expect(TokenKind::End);
    d.span = {merge(begin, close.span)};
    return d;
  }

  AstProblem problem() {
    const SourceSpan begin = peek().span;
    expect_header("problem");
    AstProblem p;
    p.name = expect_name("problem name");
    expect(TokenKind::RParen);

    expect(TokenKind::LParen);
    expect_keyword("domain");
    p.domain_name = expect_name("domain name");
    expect(TokenKind::RParen);

    // Optional sections then the mandatory :init and an optional :goal.
    enum Rank { Req, Obj, Htn, Init, Goal };
    int last_rank = -1;
    bool seen_init = false;
    while (peek().kind == TokenKind::LParen) {
      const Token &open = next();
      const Token &kw = expect(TokenKind::Keyword, "problem section keyword");
      int rank;
      if (kw.text == "requirements")
        rank = Req;
      else if (kw.text == "objects")
        rank = Obj;
      else if (kw.text == "init")
        rank = Init;
      else if (kw.text == "goal")
        rank = Goal;
      else if (kw.text == "domain")
        fail(kw, "duplicate section ':domain'");
      else if (peek().kind == TokenKind::Keyword &&
               (peek().text == "parameters" || is_subtasks_keyword(peek().text) ||
                is_ordering_keyword(peek().text) ||
                peek().text == "constraints"))
        rank = Htn; // `<p-class>` opening an initial task network
      else if (peek().kind == TokenKind::RParen)
        rank = Htn;
      else
        fail(kw, "unknown problem section ':" + kw.text + "'");

      if (rank <= last_rank)
        fail(kw, rank == last_rank ? "duplicate section ':" + kw.text + "'"
                                   : "section ':" + kw.text +
                                         "' is out of order");
      if (rank == Goal && !seen_init)
        fail(kw, "':goal' must follow ':init'");
      last_rank = rank;

      switch (rank) {
      case Req:
        p.requirements = requirement_keys();
        break;
      case Obj:
        p.objects = typed_list(TokenKind::Identifier, false);
        break;
      case Htn: {
        AstHtn htn;
        htn.problem_class = kw.text;
        if (accept_keyword("parameters")) {
          expect(TokenKind::LParen);
          htn.parameters = typed_list(TokenKind::Variable, false);
          expect(TokenKind::RParen);
        }
        htn.network = task_network();
        const Token &close = expect(TokenKind::RParen);
        htn.span = {merge(open.span, close.span)};
        p.htn = std::move(htn);
        continue;
      }
      case Init:
        seen_init = true;
        while (peek().kind == TokenKind::LParen)
          p.init.push_back(init_literal());
        break;
      case Goal:
        p.goal = gd();
        break;
      }
      expect(TokenKind::RParen);
    }
    if (!seen_init)
      fail(peek(), "problem is missing the mandatory ':init' section");
    const Token &close = expect(TokenKind::RParen, "problem section or ')'");
    expect(TokenKind::End);
    p.span = {merge(begin, close.span)};
    return p;
  }

  /// Peeks at `(define (domain` / `(define (problem`.
  bool is_domain_file() const {
    if (toks_.size() > 3 && toks_[0].kind == TokenKind::LParen &&
        toks_[1].kind == TokenKind::Identifier && toks_[1].text == "define" &&
        toks_[2].kind == TokenKind::LParen &&
        toks_[3].kind == TokenKind::Identifier)
      return toks_[3].text == "domain";
    return true;
  }

private:
  // ---- token plumbing -------------------------------------------------

  const Token &peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  const Token &next() {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token &at, const std::string &message,
                         const char *code = "syntax-error") const {
    throw DiagnosticError(Diagnostic{Severity::Error, code, message, at.span});
  }

  [[noreturn]] void unexpected(const std::string &expected) const {
    fail(peek(), "expected " + expected + ", got " + peek().spelling());
  }

  const Token &expect(TokenKind kind, const std::string &what = "") {
    if (peek().kind != kind)
      unexpected(what.empty() ? std::string(to_string(kind)) : what);
    return next();
  }

  void expect_keyword(const std::string &kw) {
    if (peek().kind != TokenKind::Keyword || peek().text != kw)
      unexpected("':" + kw + "'");
    next();
  }

  bool accept_keyword(const std::string &kw) {
    if (peek().kind == TokenKind::Keyword && peek().text == kw) {
      next();
      return true;
    }
    return false;
  }

  bool peek_identifier(const char *text, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Identifier && peek(ahead).text == text;
  }

  std::string expect_name(const std::string &what) {
    return expect(TokenKind::Identifier, what).text;
  }

  void expect_header(const char *kind) {
    expect(TokenKind::LParen);
    if (!peek_identifier("define"))
      unexpected("'define'");
    next();
    expect(TokenKind::LParen);
    if (!peek_identifier(kind))
      unexpected(std::string("'") + kind + "'");
    next();
  }

  // ---- shared productions ---------------------------------------------

  std::vector<std::string> requirement_keys() {
    std::vector<std::string> keys;
    while (peek().kind == TokenKind::Keyword)
      keys.push_back(next().text);
    if (keys.empty())
      unexpected("requirement key");
    return keys;
  }

  AstType type() {
    AstType t;
    if (peek().kind == TokenKind::LParen) {
      next();
      if (!peek_identifier("either"))
        unexpected("'either'");
      next();
      t.either = true;
      while (peek().kind == TokenKind::Identifier)
        t.names.push_back(next().text);
      if (t.names.empty())
        unexpected("primitive type");
      expect(TokenKind::RParen);
    } else {
      t.names.push_back(expect_name("type name"));
    }
    return t;
  }

  /// `<typed list (x)>` up to (not including) the closing ')'. Trailing
  /// untyped elements are allowed only when `allow_untyped` is set.
  AstTypedList typed_list(TokenKind element, bool allow_untyped) {
    AstTypedList out;
    std::size_t run_start = 0;
    const char *what = element == TokenKind::Variable ? "variable" : "name";
    while (true) {
      const Token &t = peek();
      if (t.kind == element) {
        next();
        out.push_back(AstTypedName{t.text, t.kind == TokenKind::Variable, std::nullopt, {t.span}});
      } else if (t.kind == TokenKind::Dash) {
        if (run_start == out.size())
          fail(t, std::string("expected ") + what + " before '-'");
        next();
        const AstType ty = type();
        for (std::size_t i = run_start; i < out.size(); ++i)
          out[i].type = ty;
        run_start = out.size();
      } else if (t.kind == TokenKind::RParen) {
        if (run_start != out.size() && !allow_untyped)
          fail(toks_[pos_ - 1],
               "typed list element '" + out.back().name +
                   "' has no type; expected '- <type>'",
               "untyped-list");
        return out;
      } else {
        unexpected(std::string(what) + ", '-' or ')'");
      }
    }
  }

  AstTerm term() {
    const Token &t = peek();
    if (t.kind == TokenKind::Variable || t.kind == TokenKind::Identifier) {
      next();
      return AstTerm{t.kind == TokenKind::Variable, t.text, {t.span}};
    }
    unexpected("term");
  }

  std::vector<AstTerm> terms_until_rparen() {
    std::vector<AstTerm> out;
    while (peek().kind != TokenKind::RParen)
      out.push_back(term());
    return out;
  }

  AstPredicate predicate() {
    const Token &open = expect(TokenKind::LParen);
    AstPredicate p;
    p.name = expect_name("predicate name");
    p.parameters = typed_list(TokenKind::Variable, false);
    const Token &close = expect(TokenKind::RParen);
    p.span = {merge(open.span, close.span)};
    return p;
  }

  /// `(pred t*)` with the opening paren already consumed.
  AstAtom atom_body(const Token &open) {
    AstAtom a;
    const Token &name = expect(TokenKind::Identifier, "predicate name");
    if (name.text == "=" || name.text == "and" || name.text == "or" ||
        name.text == "not")
      fail(name, "'" + name.text + "' is not allowed here");
    a.predicate = name.text;
    a.args = terms_until_rparen();
    const Token &close = expect(TokenKind::RParen);
    a.span = {merge(open.span, close.span)};
    return a;
  }

  AstAtom atom() {
    const Token &open = expect(TokenKind::LParen, "atomic formula");
    return atom_body(open);
  }

  // ---- domain elements ------------------------------------------------

  AstTaskDef task_def(const Token &open) {
    AstTaskDef t;
    t.name = expect_name("task name");
    expect_keyword("parameters");
    expect(TokenKind::LParen);
    t.parameters = typed_list(TokenKind::Variable, false);
    expect(TokenKind::RParen);
    const Token &close = expect(TokenKind::RParen);
    t.span = {merge(open.span, close.span)};
    return t;
  }

  AstAction action(const Token &open) {
    AstAction a;
    a.name = expect_name("action name");
    expect_keyword("parameters");
    expect(TokenKind::LParen);
    a.parameters = typed_list(TokenKind::Variable, false);
    expect(TokenKind::RParen);
    if (accept_keyword("precondition"))
      a.precondition = gd();
    if (accept_keyword("effect") || accept_keyword("effects"))
      a.effect = effect();
    const Token &close = expect(TokenKind::RParen, "':precondition', ':effect' or ')'");
    a.span = {merge(open.span, close.span)};
    return a;
  }

  AstMethod method(const Token &open) {
    AstMethod m;
    m.name = expect_name("method name");
    expect_keyword("parameters");
    expect(TokenKind::LParen);
    m.parameters = typed_list(TokenKind::Variable, false);
    expect(TokenKind::RParen);
    expect_keyword("task");
    const Token &topen = expect(TokenKind::LParen);
    m.task.name = expect_name("task symbol");
    m.task.args = terms_until_rparen();
    const Token &tclose = expect(TokenKind::RParen);
    m.task.span = {merge(topen.span, tclose.span)};
    if (accept_keyword("precondition"))
      m.precondition = gd();
    m.network = task_network();
    const Token &close = expect(TokenKind::RParen, "task network section or ')'");
    m.span = {merge(open.span, close.span)};
    return m;
  }

  /// `<tasknetwork-def>`: three optional sections, each at most once. The
  /// grammar lists them as subtasks, ordering, constraints, but published
  /// examples also put `:constraints` first, so any order is accepted.
  AstTaskNetwork task_network() {
    AstTaskNetwork net;
    const SourceSpan begin = peek().span;
    SourceSpan end = begin;
    bool seen_subtasks = false, seen_ordering = false, seen_constraints = false;
    const Token *ordering_kw = nullptr;
    while (peek().kind == TokenKind::Keyword) {
      const Token &kw = peek();
      if (is_subtasks_keyword(kw.text)) {
        if (seen_subtasks)
          fail(kw, "duplicate subtask section ':" + kw.text + "'");
        seen_subtasks = true;
        next();
        net.totally_ordered = kw.text.rfind("ordered-", 0) == 0;
        net.keyword = kw.text.ends_with("subtasks")
                          ? AstTaskNetwork::Keyword::Subtasks
                          : AstTaskNetwork::Keyword::Tasks;
        net.subtasks = subtask_defs();
      } else if (is_ordering_keyword(kw.text)) {
        if (seen_ordering)
          fail(kw, "duplicate ordering section ':" + kw.text + "'");
        seen_ordering = true;
        ordering_kw = &kw;
        next();
        net.orderings = ordering_defs();
      } else if (kw.text == "constraints") {
        if (seen_constraints)
          fail(kw, "duplicate section ':constraints'");
        seen_constraints = true;
        next();
        net.constraints = constraint_defs();
      } else {
        break;
      }
      end = toks_[pos_ - 1].span;
    }
    if (net.totally_ordered && !net.orderings.empty())
      fail(*ordering_kw, "ordering constraints are not allowed together with "
                         "an ordered subtask list");
    net.span = {merge(begin, end)};
    return net;
  }

  AstSubtask subtask_def() {
    const Token &open = expect(TokenKind::LParen, "subtask");
    AstSubtask s;
    const Token &first = expect(TokenKind::Identifier, "task symbol or subtask id");
    if (peek().kind == TokenKind::LParen) {
      s.id = first.text;
      next();
      s.task = expect_name("task symbol");
      s.args = terms_until_rparen();
      expect(TokenKind::RParen);
    } else {
      s.task = first.text;
      s.args = terms_until_rparen();
    }
    const Token &close = expect(TokenKind::RParen);
    s.span = {merge(open.span, close.span)};
    return s;
  }

  /// Reads `()`, a single element, or `(and element+)` for the three
  /// task-network list productions.
  template <class F> auto list_or_single(F element) {
    using T = decltype(element());
    std::vector<T> out;
    if (peek().kind != TokenKind::LParen)
      unexpected("'('");
    if (peek(1).kind == TokenKind::RParen) {
      next();
      next();
      return out;
    }
    if (peek_identifier("and", 1)) {
      next();
      next();
      while (peek().kind == TokenKind::LParen)
        out.push_back(element());
      expect(TokenKind::RParen);
      return out;
    }
    out.push_back(element());
    return out;
  }

  std::vector<AstSubtask> subtask_defs() {
    return list_or_single([this] { return subtask_def(); });
  }

  std::vector<AstOrdering> ordering_defs() {
    return list_or_single([this] {
      const Token &open = expect(TokenKind::LParen);
      AstOrdering o;
      o.before = expect_name("subtask id");
      expect(TokenKind::Less, "'<'");
      o.after = expect_name("subtask id");
      const Token &close = expect(TokenKind::RParen);
      o.span = {merge(open.span, close.span)};
      return o;
    });
  }

  std::vector<AstConstraint> constraint_defs() {
    auto raw = list_or_single([this]() -> std::optional<AstConstraint> {
      const Token &open = expect(TokenKind::LParen);
      if (peek().kind == TokenKind::RParen) { // `()` constraint
        next();
        return std::nullopt;
      }
      AstConstraint c;
      if (peek_identifier("not")) {
        next();
        c.negated = true;
        expect(TokenKind::LParen);
      }
      if (!peek_identifier("="))
        unexpected("'=' or 'not'");
      next();
      c.lhs = term();
      c.rhs = term();
      expect(TokenKind::RParen);
      if (c.negated)
        expect(TokenKind::RParen);
      c.span = {merge(open.span, toks_[pos_ - 1].span)};
      return c;
    });
    std::vector<AstConstraint> out;
    for (auto &c : raw)
      if (c)
        out.push_back(std::move(*c));
    return out;
  }

  // ---- formulas -------------------------------------------------------

  AstGd gd() {
    const Token &open = expect(TokenKind::LParen, "goal description");
    AstGd g;
    auto finish = [&](AstGd &node) {
      const Token &close = expect(TokenKind::RParen);
      node.span = {merge(open.span, close.span)};
    };
    if (peek().kind == TokenKind::RParen) {
      g.kind = AstGd::Kind::Empty;
      finish(g);
      return g;
    }
    const Token &head = expect(TokenKind::Identifier, "connective or predicate");
    if (head.text == "and" || head.text == "or") {
      g.kind = head.text == "and" ? AstGd::Kind::And : AstGd::Kind::Or;
      if (g.kind == AstGd::Kind::Or)
        g.requirement = "disjunctive-preconditions";
      while (peek().kind == TokenKind::LParen)
        g.children.push_back(gd());
    } else if (head.text == "not") {
      g.kind = AstGd::Kind::Not;
      g.children.push_back(gd());
      const auto inner = g.children.front().kind;
      g.requirement = inner == AstGd::Kind::Atom || inner == AstGd::Kind::Equals
                          ? "negative-preconditions"
                          : "disjunctive-preconditions";
    } else if (head.text == "imply") {
      g.kind = AstGd::Kind::Imply;
      g.requirement = "disjunctive-preconditions";
      g.children.push_back(gd());
      g.children.push_back(gd());
    } else if (head.text == "exists" || head.text == "forall") {
      const bool ex = head.text == "exists";
      g.kind = ex ? AstGd::Kind::Exists : AstGd::Kind::Forall;
      g.requirement = ex ? "existential-preconditions" : "universal-preconditions";
      expect(TokenKind::LParen);
      g.variables = typed_list(TokenKind::Variable, false);
      expect(TokenKind::RParen);
      g.children.push_back(gd());
    } else if (head.text == "=") {
      g.kind = AstGd::Kind::Equals;
      g.terms.push_back(term());
      g.terms.push_back(term());
    } else {
      g.kind = AstGd::Kind::Atom;
      g.atom.predicate = head.text;
      g.atom.args = terms_until_rparen();
      const Token &close = expect(TokenKind::RParen);
      g.atom.span = {merge(open.span, close.span)};
      g.span = g.atom.span;
      return g;
    }
    finish(g);
    return g;
  }

  AstEffect p_effect(const Token &open) {
    AstEffect e;
    if (peek_identifier("not")) {
      next();
      e.kind = AstEffect::Kind::Delete;
      e.atom = atom();
      const Token &close = expect(TokenKind::RParen);
      e.span = {merge(open.span, close.span)};
    } else {
      e.kind = AstEffect::Kind::Add;
      e.atom = atom_body(open);
      e.span = e.atom.span;
    }
    return e;
  }

  /// `<cond-effect>`: `(and <p-effect>*)` or a single `<p-effect>`.
  AstEffect cond_effect() {
    const Token &open = expect(TokenKind::LParen, "conditional effect");
    if (peek_identifier("and")) {
      next();
      AstEffect e;
      e.kind = AstEffect::Kind::And;
      while (peek().kind == TokenKind::LParen) {
        const Token &inner = next();
        e.children.push_back(p_effect(inner));
      }
      const Token &close = expect(TokenKind::RParen);
      e.span = {merge(open.span, close.span)};
      return e;
    }
    if (peek_identifier("forall") || peek_identifier("when"))
      fail(peek(), "only primitive effects are allowed inside 'when'");
    return p_effect(open);
  }

  /// `<c-effect>` with the opening paren already consumed.
  AstEffect c_effect(const Token &open) {
    if (peek_identifier("forall")) {
      next();
      AstEffect e;
      e.kind = AstEffect::Kind::Forall;
      e.requirement = "conditional-effects";
      expect(TokenKind::LParen);
      e.variables = typed_list(TokenKind::Variable, true);
      expect(TokenKind::RParen);
      e.children.push_back(effect());
      const Token &close = expect(TokenKind::RParen);
      e.span = {merge(open.span, close.span)};
      return e;
    }
    if (peek_identifier("when")) {
      next();
      AstEffect e;
      e.kind = AstEffect::Kind::When;
      e.requirement = "conditional-effects";
      e.condition = gd();
      e.children.push_back(cond_effect());
      const Token &close = expect(TokenKind::RParen);
      e.span = {merge(open.span, close.span)};
      return e;
    }
    if (peek_identifier("and"))
      fail(peek(), "nested 'and' is not allowed in effects");
    return p_effect(open);
  }

  AstEffect effect() {
    const Token &open = expect(TokenKind::LParen, "effect");
    if (peek().kind == TokenKind::RParen) {
      const Token &close = next();
      AstEffect e;
      e.span = {merge(open.span, close.span)};
      return e;
    }
    if (peek_identifier("and")) {
      next();
      AstEffect e;
      e.kind = AstEffect::Kind::And;
      while (peek().kind == TokenKind::LParen) {
        const Token &inner = next();
        e.children.push_back(c_effect(inner));
      }
      const Token &close = expect(TokenKind::RParen);
      e.span = {merge(open.span, close.span)};
      return e;
    }
    return c_effect(open);
  }

  // ---- problem elements -----------------------------------------------

  AstInitLiteral init_literal() {
    const Token &open = expect(TokenKind::LParen);
    AstInitLiteral lit;
    if (peek_identifier("not")) {
      next();
      lit.positive = false;
      lit.atom = atom();
      const Token &close = expect(TokenKind::RParen);
      lit.span = {merge(open.span, close.span)};
    } else {
      lit.atom = atom_body(open);
      lit.span = lit.atom.span;
    }
    for (const auto &arg : lit.atom.args)
      if (arg.is_variable)
        throw DiagnosticError(Diagnostic{Severity::Error, "syntax-error",
                                         "initial state literals must be ground",
                                         arg.span.value});
    return lit;
  }

  const std::vector<Token> &toks_;
  std::size_t pos_ = 0;
};

} // namespace

AstDomain parse_domain(const std::vector<Token> &tokens) {
  return Parser(tokens).domain();
}

AstProblem parse_problem(const std::vector<Token> &tokens) {
  return Parser(tokens).problem();
}

AstDomain parse_domain_text(std::string_view text, std::string_view file) {
  return parse_domain(tokenize(text, file));
}

AstProblem parse_problem_text(std::string_view text, std::string_view file) {
  return parse_problem(tokenize(text, file));
}

std::variant<AstDomain, AstProblem> parse_any_text(std::string_view text,
                                                   std::string_view file) {
  const auto tokens = tokenize(text, file);
  Parser probe(tokens);
  if (probe.is_domain_file())
    return parse_domain(tokens);
  return parse_problem(tokens);
}

} // namespace hddl::syntax
