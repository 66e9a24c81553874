#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evsys/event_graph.hpp"
#include "evsys/event_system.hpp"
#include "evsys/exact_linalg.hpp"

namespace evsys {

/// One exact certificate per cycle-space basis vector: the integer event
/// combination v, the rational product prod_j (sigma_j/tau_j)^{v_j}, and its
/// log as a float weight. Whether the product equals one is decided by exact
/// factor cancellation and never overflows; the product itself is reported
/// only when it fits a 64-bit fraction.
struct WegscheiderCertificate {
  IntVector event_combination;
  bool product_is_one = false;
  std::optional<Rational> exact_product;
  double weight = 0.0;
};

struct NaturalityVerdict {
  bool natural = false;
  std::vector<WegscheiderCertificate> certificates;
};

/// Detailed-balance certification: natural iff every certificate's exact
/// product equals 1. Equivalent to the existence of a positive point where
/// every event vanishes.
NaturalityVerdict wegscheider_check(const EventSystem& sys);

/// Species whose connected component in the event-graph is just themselves:
/// those divisible by no event side.
std::vector<Index> compute_atoms(const EventSystem& sys);

struct BSet {
  /// Species that never occur as a whole event side on their own.
  std::vector<Index> species;
  /// False when some event has a constant side, which puts the system outside
  /// the criterion's scope.
  bool criterion_applicable = true;
};

BSet compute_b_set(const EventSystem& sys);

enum class AtomicityStatus { Atomic, NotAtomic, Unknown };

struct AtomicityVerdict {
  AtomicityStatus status = AtomicityStatus::Unknown;
  std::vector<Index> atoms;
  /// One representative per species, each reachable from its species and
  /// supported on the B-set; present iff the witness search completed.
  std::optional<std::vector<Monomial>> witness;

  struct Violation {
    std::size_t event_index;
    Monomial lhs;
    Monomial rhs;
  };
  std::optional<Violation> violation;

  long nodes_used = 0;
  int max_degree_used = 0;
  std::string note;
};

/// Witness-based atomicity check. Events with a constant side route to
/// Unknown, except the single-event system { sigma - tau*X } over one
/// species, which is atomic directly. Budget exhaustion is always Unknown,
/// never NotAtomic.
AtomicityVerdict check_atomicity(const EventSystem& sys,
                                 const std::optional<SearchBudget>& budget = std::nullopt);

/// Column j is the decomposition vector of species j: the exponent vector of
/// the unique atom monomial in its component. Columns of atoms are unit
/// vectors; the map is additive over monomial products.
struct AtomDecomposition {
  std::vector<Index> atoms;
  IntMatrix species_vectors;
};

AtomDecomposition atomic_decomposition(const EventSystem& sys,
                                       const std::optional<SearchBudget>& budget = std::nullopt);

/// Decomposition vector of an arbitrary monomial, by additivity.
IntVector decompose_monomial(const AtomDecomposition& d, const Monomial& m);

/// One vector per atom: kappa_i = (D_i(X_1), ..., D_i(X_n)). Every vector
/// lies in the right kernel of the stoichiometric matrix.
std::vector<IntVector> atom_conservation_laws(const EventSystem& sys,
                                              const AtomDecomposition& d);

}  // namespace evsys
