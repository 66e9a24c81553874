#include "evsys/event_system.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

namespace evsys {

EventSystem::EventSystem(std::vector<std::string> species, std::vector<Event> events)
    : species_(std::move(species)), events_(std::move(events)) {
  if (events_.empty()) throw InvalidEventError("an event-system needs at least one event");
  if (species_.empty()) throw DimensionError("an event-system needs at least one species");

  std::unordered_set<std::string> seen;
  for (const auto& name : species_) {
    if (!valid_species_name(name)) throw DomainError("invalid species name: '" + name + "'");
    if (!seen.insert(name).second) throw DomainError("duplicate species name: '" + name + "'");
  }

  const Index n = dimension();
  for (std::size_t j = 0; j < events_.size(); ++j) {
    const Event& e = events_[j];
    if (e.lo.dimension() != n || e.hi.dimension() != n)
      throw DimensionError("event monomial dimension does not match species count");
    if (!e.sigma.positive() || !e.tau.positive())
      throw PhysicalityError("event rates must be positive");
    if (!precedes(e.lo, e.hi))
      throw InvalidEventError("event monomials are not in canonical order");
    for (std::size_t k = 0; k < j; ++k) {
      if (events_[k] == e)
        throw InvalidEventError("duplicate event after canonicalization (index " +
                                std::to_string(j) + ")");
    }
  }
}

double EventSystem::max_rate() const {
  double r = 0.0;
  for (const Event& e : events_) {
    r = std::max(r, std::max(e.sigma.to_double(), e.tau.to_double()));
  }
  return r;
}

bool valid_species_name(const std::string& name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin() + 1, name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

IntMatrix stoichiometric_matrix(const EventSystem& sys) {
  const Index m = static_cast<Index>(sys.event_count());
  const Index n = sys.dimension();
  IntMatrix gamma(m, n);
  for (Index j = 0; j < m; ++j) {
    const Event& e = sys.event(static_cast<std::size_t>(j));
    gamma.row(j) = (e.hi.exponents() - e.lo.exponents()).cast<std::int64_t>();
  }
  return gamma;
}

RealVector evaluate_all_events(const EventSystem& sys, const RealVector& x) {
  if (x.size() != sys.dimension()) throw DimensionError("point dimension mismatch");
  RealVector values(static_cast<Index>(sys.event_count()));
  for (std::size_t j = 0; j < sys.event_count(); ++j) {
    values[static_cast<Index>(j)] = evaluate(sys.event(j), x);
  }
  return values;
}

MassActionField::MassActionField(const EventSystem& sys)
    : sys_(sys), gamma_t_(stoichiometric_matrix(sys).cast<double>().transpose()) {}

void MassActionField::rhs(const RealVector& x, RealVector& out) const {
  out.noalias() = gamma_t_ * evaluate_all_events(sys_, x);
}

RealVector MassActionField::rhs(const RealVector& x) const {
  RealVector out(dimension());
  rhs(x, out);
  return out;
}

namespace {

// d/dx_k of sigma*M(x), computed without dividing by x_k.
double monomial_partial(const Monomial& m, const RealVector& x, Index k) {
  const int ek = m.exponent(k);
  if (ek == 0) return 0.0;
  double value = static_cast<double>(ek);
  for (Index i = 0; i < m.dimension(); ++i) {
    const int e = i == k ? m.exponent(i) - 1 : m.exponent(i);
    for (int c = 0; c < e; ++c) value *= x[i];
  }
  return value;
}

}  // namespace

RealMatrix MassActionField::jacobian(const RealVector& x) const {
  const Index n = dimension();
  const Index m = static_cast<Index>(sys_.event_count());
  if (x.size() != n) throw DimensionError("point dimension mismatch");
  RealMatrix event_partials(m, n);
  for (Index j = 0; j < m; ++j) {
    const Event& e = sys_.event(static_cast<std::size_t>(j));
    for (Index k = 0; k < n; ++k) {
      event_partials(j, k) = e.sigma.to_double() * monomial_partial(e.lo, x, k) -
                             e.tau.to_double() * monomial_partial(e.hi, x, k);
    }
  }
  return gamma_t_ * event_partials;
}

RealVector mass_action_rhs(const EventSystem& sys, const RealVector& x) {
  return MassActionField(sys).rhs(x);
}

std::vector<Rational> mass_action_rhs_exact(const EventSystem& sys,
                                            std::span<const Rational> x) {
  if (static_cast<Index>(x.size()) != sys.dimension())
    throw DimensionError("point dimension mismatch");
  IntMatrix gamma = stoichiometric_matrix(sys);
  std::vector<Rational> values(sys.event_count());
  for (std::size_t j = 0; j < sys.event_count(); ++j) {
    values[j] = evaluate_exact(sys.event(j), x);
  }
  std::vector<Rational> p(static_cast<std::size_t>(sys.dimension()), Rational(0));
  for (Index i = 0; i < sys.dimension(); ++i) {
    for (Index j = 0; j < gamma.rows(); ++j) {
      if (gamma(j, i) != 0) {
        p[static_cast<std::size_t>(i)] += Rational(gamma(j, i)) * values[static_cast<std::size_t>(j)];
      }
    }
  }
  return p;
}

RealMatrix rhs_jacobian(const EventSystem& sys, const RealVector& x) {
  return MassActionField(sys).jacobian(x);
}

PointClass classify_point(const RealVector& x) {
  bool has_zero = false;
  for (Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) return PointClass::Other;
    if (x[i] == 0.0) has_zero = true;
  }
  return has_zero ? PointClass::NonNegativeZPoint : PointClass::Positive;
}

}  // namespace evsys
