#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evsys/analysis.hpp"
#include "evsys/equilibrium.hpp"
#include "evsys/integrate.hpp"
#include "evsys/parser.hpp"
#include "evsys/report.hpp"

namespace {

using namespace evsys;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RealVector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("malformed vector component: '" + item + "'");
    }
  }
  RealVector v(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Index>(i)] = values[i];
  return v;
}

struct Setting {
  double value = 0.0;
  std::string source = "default";
};

Setting resolve(double flag_value, bool flag_set, const char* env_name, double fallback) {
  if (flag_set) return {flag_value, "flag"};
  if (const char* env = std::getenv(env_name)) {
    try {
      return {std::stod(env), "env"};
    } catch (const std::exception&) {
      throw DomainError(std::string("malformed ") + env_name + ": '" + env + "'");
    }
  }
  return {fallback, "default"};
}

void print_point(std::ostream& os, const RealVector& x) {
  os << '(';
  for (Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << format_double(x[i]);
  }
  os << ')';
}

void print_certificates(std::ostream& os, const NaturalityVerdict& verdict) {
  for (const WegscheiderCertificate& c : verdict.certificates) {
    os << "  certificate (";
    for (Index i = 0; i < c.event_combination.size(); ++i) {
      if (i) os << ", ";
      os << c.event_combination[i];
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12f", c.weight);
    os << "): exact product = "
       << (c.exact_product ? to_string(*c.exact_product) : std::string("(beyond 64 bits)"))
       << ", weight = " << buf << '\n';
  }
}

int cmd_validate(const std::string& file) {
  const EventSystem sys = parse_system(read_file(file));
  for (std::size_t j = 0; j < sys.event_count(); ++j) {
    std::cout << to_string(sys.event(j), sys.species()) << '\n';
  }
  return 0;
}

int cmd_analyze(const std::string& file, const ReportConfig& config, bool as_json) {
  const EventSystem sys = parse_system(read_file(file));
  const AnalysisReport report = analyze_system(sys, config);
  if (as_json) {
    std::cout << report_json(sys, report);
  } else {
    report_text(std::cout, sys, report);
  }
  int code = 0;
  if (!report.naturality.natural) code |= 3;
  if (report.atomicity.status == AtomicityStatus::Unknown) code |= 4;
  return code;
}

int cmd_equilibrium(const std::string& file, const std::optional<std::string>& at) {
  const EventSystem sys = parse_system(read_file(file));
  const NaturalityVerdict verdict = wegscheider_check(sys);
  if (!verdict.natural) {
    std::cout << "system is not natural; no positive detailed-balance point exists\n";
    print_certificates(std::cout, verdict);
    return 3;
  }

  const RealVector c_star = base_strong_equilibrium(sys);
  std::cout << "base equilibrium: ";
  print_point(std::cout, c_star);
  std::cout << ", detailed-balance residual = "
            << format_double(detailed_balance_residual(sys, c_star)) << '\n';

  if (at) {
    const RealVector p = parse_vector(*at);
    const EquilibriumResult result = class_equilibrium(sys, c_star, p);
    std::cout << "class point ";
    print_point(std::cout, p);
    std::cout << ": equilibrium = ";
    print_point(std::cout, result.point);
    std::cout << ", class residual = " << format_double(result.class_residual)
              << ", detailed-balance residual = "
              << format_double(result.detailed_balance_residual)
              << ", iterations = " << result.iterations << '\n';
  }
  return 0;
}

struct SimulateArgs {
  std::string file;
  std::string x0;
  std::string out_path;
  double t_end = 10.0;
  bool t_end_set = false;
  double rel_tol = 0.0;
  bool rel_tol_set = false;
  double abs_tol = 0.0;
  bool abs_tol_set = false;
  double eq_tol = 0.0;
  bool eq_tol_set = false;
  int samples = 50;
  bool to_equilibrium = false;
  bool clamp = false;
  bool stiff = false;
};

int cmd_simulate(const SimulateArgs& args) {
  const EventSystem sys = parse_system(read_file(args.file));
  const RealVector x0 = parse_vector(args.x0);

  SimOptions opts;
  opts.rel_tol = resolve(args.rel_tol, args.rel_tol_set, "EVSYS_REL_TOL", 1e-8).value;
  opts.abs_tol = resolve(args.abs_tol, args.abs_tol_set, "EVSYS_ABS_TOL", 1e-10).value;
  opts.equilibrium_tol =
      resolve(args.eq_tol, args.eq_tol_set, "EVSYS_EQUILIBRIUM_TOL", 1e-10).value;
  opts.t_end = args.t_end;
  opts.negativity = args.clamp ? NegativityPolicy::Clamp : NegativityPolicy::Reject;
  opts.method =
      args.stiff ? IntegrationMethod::ImplicitMidpoint : IntegrationMethod::DormandPrince45;

  if (args.samples > 1 && opts.t_end > 0.0) {
    const double lo = opts.t_end * 1e-4;
    for (int k = 0; k < args.samples; ++k) {
      opts.sample_times.push_back(
          lo * std::pow(opts.t_end / lo, static_cast<double>(k) / (args.samples - 1)));
    }
  }

  const NaturalityVerdict verdict = wegscheider_check(sys);
  std::optional<RealVector> c;
  if (verdict.natural) {
    c = base_strong_equilibrium(sys);
    opts.lyapunov_ref = c;
  }

  Trajectory traj;
  bool reached = false;
  if (args.to_equilibrium) {
    EquilibriumReach r = simulate_to_equilibrium(sys, x0, opts);
    traj = std::move(r.trajectory);
    reached = r.reached;
  } else {
    traj = integrate(sys, x0, opts);
  }

  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + args.out_path);
    write_trajectory_csv(out, sys, traj, c);
  }

  const MonitorReport monitors = run_monitors(sys, c, traj);
  std::cout << "steps: " << traj.steps_accepted << " accepted, " << traj.steps_rejected
            << " rejected; final t = " << format_double(traj.times.back()) << '\n';
  std::cout << "min component = " << format_double(monitors.min_component)
            << ", max component = " << format_double(monitors.max_component) << '\n';
  std::cout << "max conservation drift = " << format_double(monitors.max_conservation_drift)
            << '\n';
  if (monitors.max_lyapunov_increase) {
    std::cout << "max lyapunov increase = "
              << format_double(*monitors.max_lyapunov_increase) << '\n';
  } else {
    std::cout << "note: system is not natural; lyapunov monitor disabled\n";
  }
  if (monitors.clamped_components > 0) {
    std::cout << "note: " << monitors.clamped_components
              << " negative components clamped to zero\n";
  }

  if (traj.status == SimStatus::StepUnderflow || traj.status == SimStatus::MaxStepsExceeded) {
    std::cerr << "integration failed: " << traj.diagnostic << '\n';
    return 5;
  }

  if (args.to_equilibrium) {
    const RealVector& final_state = traj.states.back();
    std::cout << (reached ? "reached equilibrium " : "timeout; best state ");
    print_point(std::cout, final_state);
    std::cout << " with |P|_inf = " << format_double(monitors.final_rhs_norm) << '\n';

    if (verdict.natural) {
      const AtomicityVerdict atom = check_atomicity(sys);
      if (atom.status == AtomicityStatus::Atomic) {
        const EquilibriumResult solve = class_equilibrium(sys, *c, x0);
        double worst = 0.0;
        for (Index i = 0; i < final_state.size(); ++i) {
          worst = std::max(worst, std::abs(final_state[i] - solve.point[i]) /
                                      std::max(1e-300, std::abs(solve.point[i])));
        }
        std::cout << "atomic cross-check vs convex solve: ";
        print_point(std::cout, solve.point);
        std::cout << ", max relative difference = " << format_double(worst) << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reversible mass-action reaction systems as binomial event-systems"};
  app.require_subcommand(1);

  std::string file;
  bool as_json = false;
  long budget_degree = 0;
  long budget_nodes = 0;
  std::string at_text;
  SimulateArgs sim;

  CLI::App* validate = app.add_subcommand("validate", "parse and print the canonical events");
  validate->add_option("file", file, "reaction system file")->required();

  CLI::App* analyze =
      app.add_subcommand("analyze", "conservation, naturality, atomicity, atom laws");
  analyze->add_option("file", file, "reaction system file")->required();
  analyze->add_flag("--json", as_json, "emit the JSON report");
  CLI::Option* opt_bd =
      analyze->add_option("--budget-degree", budget_degree, "witness search degree cap");
  CLI::Option* opt_bn =
      analyze->add_option("--budget-nodes", budget_nodes, "witness search node cap");

  CLI::App* equilibrium =
      app.add_subcommand("equilibrium", "base and in-class detailed-balance points");
  equilibrium->add_option("file", file, "reaction system file")->required();
  CLI::Option* opt_at =
      equilibrium->add_option("--at", at_text, "comma-separated positive class point");

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the mass-action flow");
  simulate->add_option("file", sim.file, "reaction system file")->required();
  simulate->add_option("--x0", sim.x0, "comma-separated initial state")->required();
  CLI::Option* opt_tend = simulate->add_option("--t-end", sim.t_end, "integration horizon");
  CLI::Option* opt_rel = simulate->add_option("--rel-tol", sim.rel_tol, "relative tolerance");
  CLI::Option* opt_abs = simulate->add_option("--abs-tol", sim.abs_tol, "absolute tolerance");
  CLI::Option* opt_eqt =
      simulate->add_option("--equilibrium-tol", sim.eq_tol, "equilibrium residual tolerance");
  simulate->add_option("--out", sim.out_path, "trajectory CSV path");
  simulate->add_option("--samples", sim.samples, "geometric sample-grid size");
  simulate->add_flag("--to-equilibrium", sim.to_equilibrium,
                     "stop when the scaled residual is below tolerance");
  simulate->add_flag("--clamp", sim.clamp, "floor negative components at zero");
  simulate->add_flag("--stiff", sim.stiff, "implicit midpoint fallback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*analyze) {
      ReportConfig config;
      const char* env_bd = std::getenv("EVSYS_BUDGET_DEGREE");
      const char* env_bn = std::getenv("EVSYS_BUDGET_NODES");
      long degree = opt_bd->count() ? budget_degree : (env_bd ? std::atol(env_bd) : 0);
      long nodes = opt_bn->count() ? budget_nodes : (env_bn ? std::atol(env_bn) : 0);
      config.budget_degree_source = opt_bd->count() ? "flag" : (env_bd ? "env" : "default");
      config.budget_nodes_source = opt_bn->count() ? "flag" : (env_bn ? "env" : "default");
      if (degree > 0 || nodes > 0) {
        config.budget = SearchBudget{degree > 0 ? static_cast<int>(degree) : 64,
                                     nodes > 0 ? nodes : 100000};
      }
      return cmd_analyze(file, config, as_json);
    }
    if (*equilibrium) {
      return cmd_equilibrium(file,
                             opt_at->count() ? std::optional<std::string>(at_text)
                                             : std::nullopt);
    }
    if (*simulate) {
      sim.t_end_set = opt_tend->count() > 0;
      sim.rel_tol_set = opt_rel->count() > 0;
      sim.abs_tol_set = opt_abs->count() > 0;
      sim.eq_tol_set = opt_eqt->count() > 0;
      return cmd_simulate(sim);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const PhysicalityError& e) {
    std::cerr << "physicality error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidEventError& e) {
    std::cerr << "invalid event: " << e.what() << '\n';
    return 2;
  } catch (const NaturalityError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
