#include "evsys/report.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <ostream>

#include "evsys/integrate.hpp"

namespace evsys {

AnalysisReport analyze_system(const EventSystem& sys, const ReportConfig& config) {
  AnalysisReport report;
  report.config = config;
  report.gamma = stoichiometric_matrix(sys);
  report.conservation_laws = right_kernel(report.gamma);
  report.cycle_space = left_kernel(report.gamma);
  report.naturality = wegscheider_check(sys);
  report.atomicity = check_atomicity(sys, config.budget);

  if (report.atomicity.status == AtomicityStatus::Atomic) {
    try {
      const AtomDecomposition d = atomic_decomposition(sys, config.budget);
      report.atom_laws = atom_conservation_laws(sys, d);
    } catch (const Error& e) {
      report.atom_laws_note = e.what();
    }
  }

  if (report.naturality.natural) {
    report.base_equilibrium = base_strong_equilibrium(sys);
    report.base_db_residual = detailed_balance_residual(sys, *report.base_equilibrium);
  }
  return report;
}

namespace {

using json = nlohmann::ordered_json;

json int_matrix_rows(const IntMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json int_vector_list(const IntMatrix& columns) {
  json out = json::array();
  for (Index k = 0; k < columns.cols(); ++k) {
    json v = json::array();
    for (Index i = 0; i < columns.rows(); ++i) v.push_back(columns(i, k));
    out.push_back(std::move(v));
  }
  return out;
}

const char* status_name(AtomicityStatus s) {
  switch (s) {
    case AtomicityStatus::Atomic:
      return "atomic";
    case AtomicityStatus::NotAtomic:
      return "not_atomic";
    default:
      return "unknown";
  }
}

std::string weight_12(double w) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12f", w);
  return buf;
}

}  // namespace

std::string report_json(const EventSystem& sys, const AnalysisReport& report) {
  json j;
  j["schema_version"] = report.schema_version;

  json config;
  if (report.config.budget) {
    config["budget_degree"] = report.config.budget->max_total_degree;
    config["budget_nodes"] = report.config.budget->max_nodes;
  } else {
    config["budget_degree"] = nullptr;
    config["budget_nodes"] = nullptr;
  }
  config["class_tol"] = report.config.class_tol;
  config["sources"] = {{"budget_degree", report.config.budget_degree_source},
                       {"budget_nodes", report.config.budget_nodes_source},
                       {"class_tol", report.config.class_tol_source}};
  j["config"] = std::move(config);

  json system;
  system["n"] = sys.dimension();
  system["m"] = sys.event_count();
  system["species"] = sys.species();
  json events = json::array();
  for (const Event& e : sys.events()) {
    events.push_back({{"sigma", to_string(e.sigma)},
                      {"tau", to_string(e.tau)},
                      {"lo", to_string(e.lo, sys.species())},
                      {"hi", to_string(e.hi, sys.species())},
                      {"display", to_string(e, sys.species())}});
  }
  system["events"] = std::move(events);
  j["system"] = std::move(system);

  j["stoichiometric_matrix"] = int_matrix_rows(report.gamma);
  j["conservation_laws"] = int_vector_list(report.conservation_laws.vectors);
  j["cycle_space"] = int_vector_list(report.cycle_space.vectors);

  json naturality;
  naturality["natural"] = report.naturality.natural;
  json certs = json::array();
  for (const WegscheiderCertificate& c : report.naturality.certificates) {
    json v = json::array();
    for (Index i = 0; i < c.event_combination.size(); ++i) v.push_back(c.event_combination[i]);
    certs.push_back({{"events", std::move(v)},
                     {"product_is_one", c.product_is_one},
                     {"exact_product", c.exact_product
                                           ? json(to_string(*c.exact_product))
                                           : json(nullptr)},
                     {"weight", c.weight}});
  }
  naturality["certificates"] = std::move(certs);
  j["naturality"] = std::move(naturality);

  json atomicity;
  atomicity["status"] = status_name(report.atomicity.status);
  json atoms = json::array();
  for (Index i : report.atomicity.atoms) atoms.push_back(sys.species()[static_cast<std::size_t>(i)]);
  atomicity["atoms"] = std::move(atoms);
  if (report.atomicity.witness) {
    json witness = json::array();
    for (const Monomial& m : *report.atomicity.witness) witness.push_back(to_string(m, sys.species()));
    atomicity["witness"] = std::move(witness);
  } else {
    atomicity["witness"] = nullptr;
  }
  if (report.atomicity.violation) {
    atomicity["violation"] = {
        {"event", report.atomicity.violation->event_index},
        {"lhs", to_string(report.atomicity.violation->lhs, sys.species())},
        {"rhs", to_string(report.atomicity.violation->rhs, sys.species())}};
  } else {
    atomicity["violation"] = nullptr;
  }
  atomicity["budget_used"] = {{"nodes", report.atomicity.nodes_used},
                              {"max_degree", report.atomicity.max_degree_used}};
  atomicity["note"] = report.atomicity.note;
  j["atomicity"] = std::move(atomicity);

  json laws = json::array();
  for (const IntVector& kappa : report.atom_laws) {
    json v = json::array();
    for (Index i = 0; i < kappa.size(); ++i) v.push_back(kappa[i]);
    laws.push_back(std::move(v));
  }
  j["atom_conservation_laws"] = std::move(laws);
  if (!report.atom_laws_note.empty()) j["atom_conservation_laws_note"] = report.atom_laws_note;

  if (report.base_equilibrium) {
    json point = json::array();
    for (Index i = 0; i < report.base_equilibrium->size(); ++i)
      point.push_back((*report.base_equilibrium)[i]);
    j["equilibrium"] = {{"base_point", std::move(point)},
                        {"detailed_balance_residual", report.base_db_residual}};
  } else {
    j["equilibrium"] = nullptr;
  }

  return j.dump(2) + "\n";
}

namespace {

void print_int_vector(std::ostream& os, const IntVector& v) {
  os << '(';
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ')';
}

}  // namespace

void report_text(std::ostream& os, const EventSystem& sys, const AnalysisReport& report) {
  os << "system: " << sys.dimension() << " species, " << sys.event_count() << " events\n";
  os << "species:";
  for (const std::string& s : sys.species()) os << ' ' << s;
  os << '\n';
  os << "events:\n";
  for (std::size_t jdx = 0; jdx < sys.event_count(); ++jdx) {
    os << "  e" << jdx + 1 << ": " << to_string(sys.event(jdx), sys.species()) << '\n';
  }

  os << "stoichiometric matrix (events x species):\n";
  for (Index i = 0; i < report.gamma.rows(); ++i) {
    os << "  [";
    for (Index j = 0; j < report.gamma.cols(); ++j) {
      os << (j ? " " : "") << report.gamma(i, j);
    }
    os << "]\n";
  }

  os << "conservation laws (right kernel):";
  if (report.conservation_laws.count() == 0) os << " none";
  os << '\n';
  for (Index k = 0; k < report.conservation_laws.count(); ++k) {
    os << "  v" << k + 1 << " = ";
    print_int_vector(os, report.conservation_laws.vectors.col(k));
    os << '\n';
  }

  os << "cycle space (left kernel):";
  if (report.cycle_space.count() == 0) os << " none";
  os << '\n';
  for (Index k = 0; k < report.cycle_space.count(); ++k) {
    os << "  w" << k + 1 << " = ";
    print_int_vector(os, report.cycle_space.vectors.col(k));
    os << '\n';
  }

  os << "naturality: " << (report.naturality.natural ? "natural" : "NOT natural") << '\n';
  for (const WegscheiderCertificate& c : report.naturality.certificates) {
    os << "  certificate ";
    print_int_vector(os, c.event_combination);
    os << ": exact product = "
       << (c.exact_product ? to_string(*c.exact_product) : std::string("(beyond 64 bits)"))
       << ", weight = " << weight_12(c.weight) << '\n';
  }

  os << "atomicity: " << status_name(report.atomicity.status) << '\n';
  if (!report.atomicity.atoms.empty()) {
    os << "  atoms:";
    for (Index i : report.atomicity.atoms) os << ' ' << sys.species()[static_cast<std::size_t>(i)];
    os << '\n';
  }
  if (report.atomicity.witness) {
    os << "  witness:";
    for (std::size_t i = 0; i < report.atomicity.witness->size(); ++i) {
      os << ' ' << sys.species()[i] << "->"
         << to_string((*report.atomicity.witness)[i], sys.species());
    }
    os << '\n';
  }
  if (report.atomicity.violation) {
    os << "  violation: event e" << report.atomicity.violation->event_index + 1 << ": "
       << to_string(report.atomicity.violation->lhs, sys.species()) << " != "
       << to_string(report.atomicity.violation->rhs, sys.species()) << '\n';
  }
  if (!report.atomicity.note.empty()) os << "  note: " << report.atomicity.note << '\n';

  if (!report.atom_laws.empty()) {
    os << "atom conservation laws:\n";
    for (std::size_t k = 0; k < report.atom_laws.size(); ++k) {
      os << "  kappa(" << sys.species()[static_cast<std::size_t>(report.atomicity.atoms[k])]
         << ") = ";
      print_int_vector(os, report.atom_laws[k]);
      os << '\n';
    }
  }
  if (!report.atom_laws_note.empty()) os << "  note: " << report.atom_laws_note << '\n';

  if (report.base_equilibrium) {
    os << "base equilibrium: (";
    for (Index i = 0; i < report.base_equilibrium->size(); ++i) {
      if (i) os << ", ";
      os << format_double((*report.base_equilibrium)[i]);
    }
    os << "), detailed-balance residual = " << format_double(report.base_db_residual) << '\n';
  }
}

}  // namespace evsys
