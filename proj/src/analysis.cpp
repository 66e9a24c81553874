#include "evsys/analysis.hpp"

#include <algorithm>
#include <numeric>

namespace evsys {

namespace {

// prod_j (sigma_j/tau_j)^{v_j} kept as factor lists. Pairwise gcd passes
// cancel everything when the product is one, so that test is exact at any
// scale; the reduced fraction is assembled only if it fits 64 bits.
struct FactoredProduct {
  std::vector<std::int64_t> num;
  std::vector<std::int64_t> den;

  void push(const Rational& base, std::int64_t exponent) {
    const std::int64_t count = exponent < 0 ? -exponent : exponent;
    for (std::int64_t k = 0; k < count; ++k) {
      num.push_back(exponent > 0 ? base.num() : base.den());
      den.push_back(exponent > 0 ? base.den() : base.num());
    }
  }

  void cancel() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::int64_t& a : num) {
        if (a == 1) continue;
        for (std::int64_t& b : den) {
          const std::int64_t g = std::gcd(a, b);
          if (g > 1) {
            a /= g;
            b /= g;
            changed = true;
            if (a == 1) break;
          }
        }
      }
    }
  }

  bool is_one() const {
    auto all_one = [](const std::vector<std::int64_t>& v) {
      return std::all_of(v.begin(), v.end(), [](std::int64_t f) { return f == 1; });
    };
    return all_one(num) && all_one(den);
  }

  std::optional<Rational> to_rational() const {
    Rational value(1);
    try {
      for (std::int64_t f : num) value = value * Rational(f);
      for (std::int64_t f : den) value = value / Rational(f);
    } catch (const NumericError&) {
      return std::nullopt;
    }
    return value;
  }
};

}  // namespace

NaturalityVerdict wegscheider_check(const EventSystem& sys) {
  const IntMatrix gamma = stoichiometric_matrix(sys);
  const KernelBasis cycles = left_kernel(gamma);

  NaturalityVerdict verdict;
  verdict.natural = true;
  for (Index k = 0; k < cycles.count(); ++k) {
    WegscheiderCertificate cert;
    cert.event_combination = cycles.vectors.col(k);
    FactoredProduct product;
    double weight = 0.0;
    for (Index j = 0; j < cert.event_combination.size(); ++j) {
      const std::int64_t vj = cert.event_combination[j];
      if (vj == 0) continue;
      const Event& e = sys.event(static_cast<std::size_t>(j));
      product.push(e.sigma / e.tau, vj);
      weight += static_cast<double>(vj) * (e.sigma.log() - e.tau.log());
    }
    product.cancel();
    cert.product_is_one = product.is_one();
    cert.exact_product = product.to_rational();
    cert.weight = weight;
    if (!cert.product_is_one) verdict.natural = false;
    verdict.certificates.push_back(std::move(cert));
  }
  return verdict;
}

namespace {

bool side_divides_species(const Monomial& side, Index i) {
  // Divisors of a single variable are 1 and the variable itself.
  if (side.is_one()) return true;
  return side.degree() == 1 && side.exponent(i) == 1;
}

}  // namespace

std::vector<Index> compute_atoms(const EventSystem& sys) {
  std::vector<Index> atoms;
  for (Index i = 0; i < sys.dimension(); ++i) {
    bool has_edge = false;
    for (const Event& e : sys.events()) {
      if (side_divides_species(e.lo, i) || side_divides_species(e.hi, i)) {
        has_edge = true;
        break;
      }
    }
    if (!has_edge) atoms.push_back(i);
  }
  return atoms;
}

BSet compute_b_set(const EventSystem& sys) {
  BSet out;
  for (const Event& e : sys.events()) {
    if (e.lo.is_one()) out.criterion_applicable = false;
  }
  for (Index i = 0; i < sys.dimension(); ++i) {
    bool bare_side = false;
    for (const Event& e : sys.events()) {
      const bool lo_is_xi = e.lo.degree() == 1 && e.lo.exponent(i) == 1;
      const bool hi_is_xi = e.hi.degree() == 1 && e.hi.exponent(i) == 1;
      if (lo_is_xi || hi_is_xi) {
        bare_side = true;
        break;
      }
    }
    if (!bare_side) out.species.push_back(i);
  }
  return out;
}

namespace {

std::vector<bool> mask_of(const std::vector<Index>& indices, Index n) {
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  for (Index i : indices) mask[static_cast<std::size_t>(i)] = true;
  return mask;
}

// The one constant-side shape handled directly: a single event sigma - tau*X
// over its own single species. Its whole monomial set is one connected
// component containing 1.
bool is_single_constant_chain(const EventSystem& sys) {
  if (sys.event_count() != 1 || sys.dimension() != 1) return false;
  const Event& e = sys.event(0);
  return e.lo.is_one() && e.hi.degree() == 1;
}

}  // namespace

AtomicityVerdict check_atomicity(const EventSystem& sys,
                                 const std::optional<SearchBudget>& budget) {
  const Index n = sys.dimension();
  AtomicityVerdict verdict;
  verdict.atoms = compute_atoms(sys);

  const BSet bset = compute_b_set(sys);
  if (!bset.criterion_applicable) {
    if (is_single_constant_chain(sys)) {
      verdict.status = AtomicityStatus::Atomic;
      verdict.witness = std::vector<Monomial>{Monomial::one(1)};
      verdict.note =
          "single event with a constant side over one species: every monomial "
          "is connected to 1, so the system is atomic";
      return verdict;
    }
    verdict.status = AtomicityStatus::Unknown;
    verdict.note =
        "an event has a constant side; the witness criterion does not apply";
    return verdict;
  }

  const std::vector<bool> targets = mask_of(bset.species, n);
  std::vector<Monomial> witness;
  witness.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Monomial start = Monomial::variable(n, i);
    const SearchBudget b = budget ? *budget : default_budget(sys, start);
    SearchOutcome outcome = connected_search(sys, start, targets, b);
    verdict.nodes_used += outcome.nodes_visited;
    verdict.max_degree_used = std::max(verdict.max_degree_used, outcome.max_degree_seen);
    if (!outcome.found) {
      verdict.status = AtomicityStatus::Unknown;
      verdict.note = outcome.budget_exhausted
                         ? "witness search budget exhausted for species " +
                               sys.species()[static_cast<std::size_t>(i)]
                         : "species " + sys.species()[static_cast<std::size_t>(i)] +
                               " reaches no monomial over the B-set; criterion "
                               "witness does not exist";
      return verdict;
    }
    witness.push_back(std::move(*outcome.found));
  }

  // Witnesses found; test the exponent identity on every event.
  for (std::size_t j = 0; j < sys.event_count(); ++j) {
    const Event& e = sys.event(j);
    IntVector lhs = IntVector::Zero(n);
    IntVector rhs = IntVector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      lhs += static_cast<std::int64_t>(e.lo.exponent(i)) *
             witness[static_cast<std::size_t>(i)].exponents().cast<std::int64_t>();
      rhs += static_cast<std::int64_t>(e.hi.exponent(i)) *
             witness[static_cast<std::size_t>(i)].exponents().cast<std::int64_t>();
    }
    if ((lhs - rhs).any()) {
      verdict.status = AtomicityStatus::NotAtomic;
      verdict.witness = witness;
      verdict.violation = AtomicityVerdict::Violation{
          j, Monomial(ExponentVector(lhs.cast<int>())),
          Monomial(ExponentVector(rhs.cast<int>()))};
      return verdict;
    }
  }

  verdict.status = AtomicityStatus::Atomic;
  verdict.witness = std::move(witness);
  return verdict;
}

AtomDecomposition atomic_decomposition(const EventSystem& sys,
                                       const std::optional<SearchBudget>& budget) {
  AtomicityVerdict verdict = check_atomicity(sys, budget);
  if (verdict.status == AtomicityStatus::NotAtomic)
    throw AtomicityError("system is not atomic; no decomposition exists");
  if (verdict.status == AtomicityStatus::Unknown)
    throw AtomicityError("atomicity unknown: " + verdict.note);

  const Index n = sys.dimension();
  AtomDecomposition d;
  d.atoms = verdict.atoms;
  d.species_vectors = IntMatrix::Zero(n, n);

  const std::vector<bool> targets = mask_of(d.atoms, n);
  for (Index j = 0; j < n; ++j) {
    const Monomial start = Monomial::variable(n, j);
    const SearchBudget b = budget ? *budget : default_budget(sys, start);
    SearchOutcome outcome = connected_search(sys, start, targets, b);
    if (!outcome.found) {
      throw BudgetError("decomposition of species " +
                        sys.species()[static_cast<std::size_t>(j)] +
                        (outcome.budget_exhausted ? " exhausted its search budget"
                                                  : " found no atom monomial") +
                        "; partial result discarded");
    }
    d.species_vectors.col(j) = outcome.found->exponents().cast<std::int64_t>();
  }
  return d;
}

IntVector decompose_monomial(const AtomDecomposition& d, const Monomial& m) {
  if (m.dimension() != d.species_vectors.cols())
    throw DimensionError("monomial dimension mismatch");
  IntVector out = IntVector::Zero(d.species_vectors.rows());
  for (Index j = 0; j < m.dimension(); ++j) {
    if (m.exponent(j) != 0) {
      out += static_cast<std::int64_t>(m.exponent(j)) * d.species_vectors.col(j);
    }
  }
  return out;
}

std::vector<IntVector> atom_conservation_laws(const EventSystem& sys,
                                              const AtomDecomposition& d) {
  const IntMatrix gamma = stoichiometric_matrix(sys);
  std::vector<IntVector> laws;
  laws.reserve(d.atoms.size());
  for (Index atom : d.atoms) {
    IntVector kappa = d.species_vectors.row(atom).transpose();
    if ((gamma * kappa).any()) {
      throw NumericError("atom law failed the exact kernel check");
    }
    laws.push_back(std::move(kappa));
  }
  return laws;
}

}  // namespace evsys
