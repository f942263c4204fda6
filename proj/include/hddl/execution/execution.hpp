#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hddl/grounding/ground.hpp"

namespace hddl::execution {

using grounding::AtomId;
using grounding::Condition;
using grounding::GroundAction;
using grounding::GroundModel;
using grounding::GroundNetwork;

/// A set of ground atoms over the model's atom universe, as a bitset.
class State {
public:
  State() = default;
  explicit State(std::size_t universe) : words_((universe + 63) / 64, 0), universe_(universe) {}
  static State from_atoms(std::size_t universe, const std::vector<AtomId> &atoms);

  bool contains(AtomId a) const {
    return a >= 0 && static_cast<std::size_t>(a) < universe_ && (words_[a / 64] >> (a % 64)) & 1u;
  }
  void insert(AtomId a) { words_[a / 64] |= std::uint64_t{1} << (a % 64); }
  void erase(AtomId a) { words_[a / 64] &= ~(std::uint64_t{1} << (a % 64)); }
  std::size_t universe() const { return universe_; }
  std::vector<AtomId> atoms() const;
  std::size_t hash() const;

  friend bool operator==(const State &, const State &) = default;
  friend auto operator<=>(const State &, const State &) = default;

private:
  std::vector<std::uint64_t> words_;
  std::size_t universe_ = 0;
};

struct StateHash {
  std::size_t operator()(const State &s) const { return s.hash(); }
};

State initial_state(const GroundModel &g);

/// Quantifier-free ground condition; no type information needed.
bool holds(const State &s, const Condition &c);

/// Closed formula of the lifted model, possibly quantified: quantifiers
/// range over the constants of their type. Atoms outside the atom
/// universe are false.
bool holds(const State &s, const model::Formula &f, const GroundModel &g);

class PreconditionViolated : public std::runtime_error {
public:
  PreconditionViolated(const std::string &action, std::string literal)
      : std::runtime_error("precondition of " + action + " violated: " + literal),
        literal_(std::move(literal)) {}
  const std::string &literal() const noexcept { return literal_; }

private:
  std::string literal_;
};

/// The first conjunct of `c` that is false in `s`, rendered as text.
std::optional<std::string> first_failing_literal(const State &s, const Condition &c,
                                                 const GroundModel &g);

/// γ(s, a) = (s \ del) ∪ add, with conditional effects evaluated in `s`.
/// Throws PreconditionViolated when the precondition is false.
State apply(const State &s, const GroundAction &a, const GroundModel &g);

/// γ without the precondition check.
State apply_effects(const State &s, const GroundAction &a);

bool applicable(const State &s, const GroundAction &a);

struct Linearization {
  std::vector<model::TaskId> order;
  State final_state;
};

/// Some linear extension of the primitive network's order that executes
/// from `s0`, or nullopt when none does.
std::optional<Linearization> executable_linearization(const GroundModel &g, const GroundNetwork &net,
                                                       const State &s0);

} // namespace hddl::execution
