#pragma once

#include <span>
#include <string>
#include <vector>

#include "evsys/event.hpp"
#include "evsys/types.hpp"

namespace evsys {

/// A finite set of events over a fixed, ordered species list. Immutable after
/// construction; all operations on it are pure.
class EventSystem {
 public:
  EventSystem(std::vector<std::string> species, std::vector<Event> events);

  Index dimension() const { return static_cast<Index>(species_.size()); }
  std::size_t event_count() const { return events_.size(); }
  const std::vector<std::string>& species() const { return species_; }
  const std::vector<Event>& events() const { return events_; }
  const Event& event(std::size_t j) const { return events_[j]; }

  /// Largest rate appearing in the system, as a double.
  double max_rate() const;

  friend bool operator==(const EventSystem& a, const EventSystem& b) {
    return a.species_ == b.species_ && a.events_ == b.events_;
  }

 private:
  std::vector<std::string> species_;
  std::vector<Event> events_;
};

/// True for [A-Za-z][A-Za-z0-9_]*.
bool valid_species_name(const std::string& name);

/// m x n integer matrix; row j is exponents(hi_j) - exponents(lo_j).
IntMatrix stoichiometric_matrix(const EventSystem& sys);

/// All event values at a point: (e_1(x), ..., e_m(x)).
RealVector evaluate_all_events(const EventSystem& sys, const RealVector& x);

/// Cached stoichiometric transpose for repeated right-hand-side evaluation.
class MassActionField {
 public:
  explicit MassActionField(const EventSystem& sys);

  Index dimension() const { return gamma_t_.rows(); }
  void rhs(const RealVector& x, RealVector& out) const;
  RealVector rhs(const RealVector& x) const;
  RealMatrix jacobian(const RealVector& x) const;

 private:
  const EventSystem& sys_;
  RealMatrix gamma_t_;
};

/// P(x) = Gamma^T (e_1(x), ..., e_m(x))^T.
RealVector mass_action_rhs(const EventSystem& sys, const RealVector& x);

std::vector<Rational> mass_action_rhs_exact(const EventSystem& sys,
                                            std::span<const Rational> x);

/// Analytic Jacobian of the mass-action right-hand side.
RealMatrix rhs_jacobian(const EventSystem& sys, const RealVector& x);

enum class PointClass { Positive, NonNegativeZPoint, Other };

PointClass classify_point(const RealVector& x);

}  // namespace evsys
