#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evsys/event_system.hpp"

namespace evsys {

enum class NegativityPolicy { Reject, Clamp };
enum class IntegrationMethod { DormandPrince45, ImplicitMidpoint };

struct SimOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double t_end = 10.0;
  long max_steps = 1000000;
  /// Stop threshold for simulate_to_equilibrium: |P(x)|_inf <=
  /// equilibrium_tol * max(1, |x|_inf) * max rate.
  double equilibrium_tol = 1e-10;
  NegativityPolicy negativity = NegativityPolicy::Reject;
  IntegrationMethod method = IntegrationMethod::DormandPrince45;
  /// Extra output times; the integrator lands on them exactly.
  std::vector<double> sample_times;
  /// Positive detailed-balance point; enables the per-step Lyapunov monitor.
  std::optional<RealVector> lyapunov_ref;
  bool stop_at_equilibrium = false;
};

enum class SimStatus { ReachedTEnd, ReachedEquilibrium, StepUnderflow, MaxStepsExceeded };

struct StepRecord {
  double min_component = 0.0;
  double rhs_norm = 0.0;
  std::optional<double> lyapunov;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<RealVector> states;
  std::vector<StepRecord> monitors;
  SimStatus status = SimStatus::ReachedTEnd;
  long steps_accepted = 0;
  long steps_rejected = 0;
  long clamped_components = 0;
  std::string diagnostic;
};

/// Adaptive integration of x' = P(x) from a non-negative initial state, with
/// per-step monitor records. Under the Reject policy a step producing a
/// negative component is rejected and retried with half the step.
Trajectory integrate(const EventSystem& sys, const RealVector& x0, const SimOptions& opts);

struct EquilibriumReach {
  Trajectory trajectory;
  RealVector state;
  bool reached = false;
};

/// Integrates from a positive state until the scaled residual drops below
/// equilibrium_tol or t_end arrives; a timeout is a normal result carrying
/// the best state.
EquilibriumReach simulate_to_equilibrium(const EventSystem& sys, const RealVector& x0,
                                         const SimOptions& opts);

struct MonitorReport {
  double min_component = 0.0;
  double max_component = 0.0;
  /// max_t |v.(x(t) - x(0))| per right-kernel basis vector.
  std::vector<double> conservation_drift;
  double max_conservation_drift = 0.0;
  std::optional<double> max_lyapunov_increase;
  double final_rhs_norm = 0.0;
  long clamped_components = 0;
};

/// Worst-case invariant violations over a stored trajectory. The Lyapunov
/// channel needs a positive detailed-balance point c.
MonitorReport run_monitors(const EventSystem& sys, const std::optional<RealVector>& c,
                           const Trajectory& traj);

/// CSV with header `t,<species...>,lyapunov,rhs_norm`; floats are shortest
/// round-trip decimals, lyapunov is nan without a reference point.
void write_trajectory_csv(std::ostream& os, const EventSystem& sys, const Trajectory& traj,
                          const std::optional<RealVector>& c);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace evsys
