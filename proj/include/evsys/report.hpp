#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "evsys/analysis.hpp"
#include "evsys/equilibrium.hpp"

namespace evsys {

struct ReportConfig {
  /// Unset means the per-search default budget.
  std::optional<SearchBudget> budget;
  double class_tol = 1e-9;
  std::string budget_degree_source = "default";
  std::string budget_nodes_source = "default";
  std::string class_tol_source = "default";
};

/// Everything cmd_analyze reports: structure, certificates, atomicity, atom
/// laws, and the base equilibrium when one exists.
struct AnalysisReport {
  int schema_version = 1;
  ReportConfig config;
  IntMatrix gamma;
  KernelBasis conservation_laws;
  KernelBasis cycle_space;
  NaturalityVerdict naturality;
  AtomicityVerdict atomicity;
  std::vector<IntVector> atom_laws;
  std::string atom_laws_note;
  std::optional<RealVector> base_equilibrium;
  double base_db_residual = 0.0;
};

AnalysisReport analyze_system(const EventSystem& sys, const ReportConfig& config = {});

/// Stable schema-versioned JSON; byte-identical for identical input + config.
std::string report_json(const EventSystem& sys, const AnalysisReport& report);

void report_text(std::ostream& os, const EventSystem& sys, const AnalysisReport& report);

}  // namespace evsys
