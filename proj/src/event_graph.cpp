#include "evsys/event_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <unordered_map>

namespace evsys {

SearchBudget default_budget(const EventSystem& sys, const Monomial& start) {
  int max_change = 0;
  for (const Event& e : sys.events()) {
    max_change = std::max(max_change, std::abs(e.hi.degree() - e.lo.degree()));
  }
  return SearchBudget{start.degree() + 8 * max_change, 100000};
}

namespace {

bool supported_on(const Monomial& m, const std::vector<bool>& target_vars) {
  for (Index i = 0; i < m.dimension(); ++i) {
    if (m.exponent(i) > 0 && !target_vars[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

}  // namespace

SearchOutcome connected_search(const EventSystem& sys, const Monomial& start,
                               const std::vector<bool>& target_vars,
                               const SearchBudget& budget) {
  if (start.dimension() != sys.dimension())
    throw DimensionError("start monomial dimension mismatch");
  if (static_cast<Index>(target_vars.size()) != sys.dimension())
    throw DimensionError("target mask dimension mismatch");
  if (budget.max_nodes <= 0 || budget.max_total_degree <= 0)
    throw DomainError("search budget must be positive");

  SearchOutcome out;
  out.max_degree_seen = start.degree();

  std::unordered_map<Monomial, Monomial, MonomialHash> parent;
  parent.emplace(start, start);
  std::deque<Monomial> queue{start};
  bool pruned = false;

  auto finish = [&](const Monomial& hit) {
    out.found = hit;
    std::vector<Monomial> path{hit};
    Monomial cur = hit;
    while (!(parent.at(cur) == cur)) {
      cur = parent.at(cur);
      path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    out.path = std::move(path);
  };

  if (supported_on(start, target_vars)) {
    finish(start);
    return out;
  }

  while (!queue.empty()) {
    if (out.nodes_visited >= budget.max_nodes) {
      out.budget_exhausted = true;
      return out;
    }
    const Monomial node = queue.front();
    queue.pop_front();
    ++out.nodes_visited;

    for (const Event& e : sys.events()) {
      for (int dir = 0; dir < 2; ++dir) {
        const Monomial& from = dir == 0 ? e.lo : e.hi;
        const Monomial& to = dir == 0 ? e.hi : e.lo;
        if (!from.divides(node)) continue;
        Monomial next = quotient(node, from) * to;
        if (next.degree() > budget.max_total_degree) {
          pruned = true;
          continue;
        }
        if (parent.contains(next)) continue;
        out.max_degree_seen = std::max(out.max_degree_seen, next.degree());
        parent.emplace(next, node);
        if (supported_on(next, target_vars)) {
          finish(next);
          return out;
        }
        queue.push_back(next);
      }
    }
  }

  out.budget_exhausted = pruned;
  return out;
}

}  // namespace evsys
