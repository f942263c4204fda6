#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>

#include "hddl/verification/verify.hpp"

namespace hddl::planner {

using grounding::GroundModel;

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

struct SearchLimits {
  std::size_t max_decompositions = kUnbounded;
  std::size_t max_plan_length = kUnbounded;
  std::size_t node_budget = 1'000'000;
  std::chrono::milliseconds time_budget{60'000};
  bool duplicate_detection = true;
};

struct SearchStats {
  std::size_t nodes_expanded = 0;
  std::size_t duplicates_pruned = 0;
  std::size_t dead_ends_pruned = 0;
  std::size_t max_depth = 0;
  std::size_t iterations = 0;
  double elapsed_ms = 0;
  bool budget_hit = false;
};

/// key=value, one per line.
std::string to_string(const SearchStats &s);

enum class Outcome { Solved, UnsolvableWithinLimits, ProvenUnsolvable };
const char *to_string(Outcome o);

struct PlanResult {
  Outcome outcome = Outcome::UnsolvableWithinLimits;
  std::optional<verification::Solution> solution;
  SearchStats stats;
  std::string reason; // why no solution was returned
};

/// Depth-first progression search with iterative deepening on a joint
/// bound over decompositions and plan length. The ground model must have
/// its method preconditions compiled into actions.
PlanResult plan(const GroundModel &g, const SearchLimits &limits = {});

/// Fewest actions each ground task can be refined into, ignoring
/// interactions: primitive tasks count 1 when their action is applicable
/// in the delete relaxation of the initial state. Unachievable tasks map
/// to `kUnbounded`.
std::vector<std::size_t> minimum_lengths(const GroundModel &g);

} // namespace hddl::planner
