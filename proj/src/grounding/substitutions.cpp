#include <algorithm>

#include "hddl/grounding/ground.hpp"

namespace hddl::grounding {

using model::Term;
using model::TypedVariable;
using model::VariableConstraint;

namespace {

/// A constraint with its terms resolved to parameter positions; it is
/// checked as soon as the last position it mentions is bound.
struct CompiledConstraint {
  VariableConstraint::Kind kind;
  int lhs_pos = -1;
  ConstId lhs_const = -1;
  int rhs_pos = -1;
  ConstId rhs_const = -1;
  model::TypeId type = 0;
  int ready = -1;
};

class Enumerator {
public:
  Enumerator(const std::vector<TypedVariable> &params, const model::TypeHierarchy &h,
             const std::vector<VariableConstraint> &vc)
      : h_(h) {
    for (const auto &p : params)
      domains_.push_back(&h.constants_of(p.type));
    auto position = [&](const Term &t) {
      if (!t.is_variable())
        return -1;
      for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].name == t.name)
          return static_cast<int>(i);
      return -2; // unknown variable: the constraint can never be decided
    };
    for (const auto &c : vc) {
      CompiledConstraint cc;
      cc.kind = c.kind;
      cc.lhs_pos = position(c.lhs);
      cc.lhs_const = c.lhs.constant;
      cc.type = c.type;
      if (c.kind == VariableConstraint::Kind::Equal || c.kind == VariableConstraint::Kind::NotEqual) {
        cc.rhs_pos = position(c.rhs);
        cc.rhs_const = c.rhs.constant;
      }
      if (cc.lhs_pos == -2 || cc.rhs_pos == -2) {
        unsatisfiable_ = true;
        continue;
      }
      cc.ready = std::max(cc.lhs_pos, cc.rhs_pos);
      constraints_.push_back(cc);
    }
  }

  std::size_t arity() const { return domains_.size(); }
  const std::vector<ConstId> &domain(std::size_t i) const { return *domains_[i]; }

  /// Constraints over constants only.
  bool trivially_ok() const {
    if (unsatisfiable_)
      return false;
    Binding empty;
    return check(empty, -1);
  }

  /// Enumerates all completions of `b` (bound up to position depth-1).
  void run(Binding &b, std::size_t depth, std::vector<Binding> &out) const {
    if (depth == domains_.size()) {
      out.push_back(b);
      return;
    }
    for (ConstId c : *domains_[depth]) {
      b[depth] = c;
      if (check(b, static_cast<int>(depth)))
        run(b, depth + 1, out);
    }
  }

  /// Completions whose first position is `value`.
  void run_from(ConstId value, std::vector<Binding> &out) const {
    Binding b(domains_.size(), -1);
    b[0] = value;
    if (check(b, 0))
      run(b, 1, out);
  }

private:
  const model::TypeHierarchy &h_;
  std::vector<const std::vector<ConstId> *> domains_;
  std::vector<CompiledConstraint> constraints_;
  bool unsatisfiable_ = false;

  bool check(const Binding &b, int depth) const {
    for (const auto &c : constraints_) {
      if (c.ready != depth)
        continue;
      const ConstId l = c.lhs_pos >= 0 ? b[c.lhs_pos] : c.lhs_const;
      switch (c.kind) {
      case VariableConstraint::Kind::Equal:
      case VariableConstraint::Kind::NotEqual: {
        const ConstId r = c.rhs_pos >= 0 ? b[c.rhs_pos] : c.rhs_const;
        if ((l == r) != (c.kind == VariableConstraint::Kind::Equal))
          return false;
        break;
      }
      case VariableConstraint::Kind::OfType:
      case VariableConstraint::Kind::NotOfType:
        if (h_.has_type(l, c.type) != (c.kind == VariableConstraint::Kind::OfType))
          return false;
        break;
      }
    }
    return true;
  }
};

} // namespace

std::vector<Binding> substitutions(const std::vector<TypedVariable> &params,
                                   const model::TypeHierarchy &h,
                                   const std::vector<VariableConstraint> &vc) {
  Enumerator e(params, h, vc);
  std::vector<Binding> out;
  if (!e.trivially_ok())
    return out;
  Binding b(params.size(), -1);
  e.run(b, 0, out);
  return out;
}

std::vector<Binding> substitutions_parallel(const std::vector<TypedVariable> &params,
                                            const model::TypeHierarchy &h,
                                            const std::vector<VariableConstraint> &vc) {
  if (params.empty())
    return substitutions(params, h, vc);
  Enumerator e(params, h, vc);
  if (!e.trivially_ok())
    return {};
  const auto &first = e.domain(0);
  const int n = static_cast<int>(first.size());
  std::vector<std::vector<Binding>> parts(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i)
    e.run_from(first[i], parts[i]);
  std::vector<Binding> out;
  for (auto &part : parts)
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  return out;
}

model::Substitution to_substitution(const std::vector<TypedVariable> &params, const Binding &binding) {
  model::Substitution out;
  for (std::size_t i = 0; i < params.size(); ++i)
    out[params[i].name] = binding[i];
  return out;
}

} // namespace hddl::grounding
