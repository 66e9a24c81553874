#pragma once

#include <optional>
#include <vector>

#include "evsys/event_system.hpp"

namespace evsys {

struct SearchBudget {
  int max_total_degree = 0;
  long max_nodes = 0;
};

/// max_total_degree = start degree + 8 * (largest per-event degree change),
/// max_nodes = 100000. Both CLI-overridable.
SearchBudget default_budget(const EventSystem& sys, const Monomial& start);

struct SearchOutcome {
  std::optional<Monomial> found;
  /// start .. found, one rewrite per edge; empty unless found.
  std::vector<Monomial> path;
  /// True when the node cap was hit or the degree bound pruned a neighbor, so
  /// absence is inconclusive. False absence means the whole reachable set was
  /// enumerated with no hit.
  bool budget_exhausted = false;
  long nodes_visited = 0;
  int max_degree_seen = 0;
};

/// Breadth-first search over the monomials reachable from start by replacing
/// an event side that divides the current monomial with the event's other
/// side. Returns the first monomial supported only on target_vars. Any
/// returned monomial is genuinely reachable (the path is recorded).
SearchOutcome connected_search(const EventSystem& sys, const Monomial& start,
                               const std::vector<bool>& target_vars,
                               const SearchBudget& budget);

}  // namespace evsys
