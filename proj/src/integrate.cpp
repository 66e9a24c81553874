#include "evsys/integrate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "evsys/equilibrium.hpp"
#include "evsys/exact_linalg.hpp"

namespace evsys {

namespace {

constexpr double kDP5A21 = 1.0 / 5;
constexpr double kDP5A31 = 3.0 / 40, kDP5A32 = 9.0 / 40;
constexpr double kDP5A41 = 44.0 / 45, kDP5A42 = -56.0 / 15, kDP5A43 = 32.0 / 9;
constexpr double kDP5A51 = 19372.0 / 6561, kDP5A52 = -25360.0 / 2187,
                 kDP5A53 = 64448.0 / 6561, kDP5A54 = -212.0 / 729;
constexpr double kDP5A61 = 9017.0 / 3168, kDP5A62 = -355.0 / 33,
                 kDP5A63 = 46732.0 / 5247, kDP5A64 = 49.0 / 176,
                 kDP5A65 = -5103.0 / 18656;
constexpr double kDP5B1 = 35.0 / 384, kDP5B3 = 500.0 / 1113, kDP5B4 = 125.0 / 192,
                 kDP5B5 = -2187.0 / 6784, kDP5B6 = 11.0 / 84;
constexpr double kDP5E1 = 71.0 / 57600, kDP5E3 = -71.0 / 16695, kDP5E4 = 71.0 / 1920,
                 kDP5E5 = -17253.0 / 339200, kDP5E6 = 22.0 / 525, kDP5E7 = -1.0 / 40;

double error_norm(const RealVector& err, const RealVector& y0, const RealVector& y1,
                  double rel_tol, double abs_tol) {
  double sum = 0.0;
  for (Index i = 0; i < err.size(); ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

double initial_step(const MassActionField& field, const RealVector& x0,
                    const RealVector& f0, double rel_tol, double abs_tol, double t_end) {
  const Index n = x0.size();
  double d0 = 0.0, d1 = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double sc = abs_tol + rel_tol * std::abs(x0[i]);
    d0 += (x0[i] / sc) * (x0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_end);
  if (h0 <= 0.0) return 1e-6;

  const RealVector x1 = x0 + h0 * f0;
  const RealVector f1 = field.rhs(x1);
  double d2 = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double sc = abs_tol + rel_tol * std::abs(x0[i]);
    const double q = (f1[i] - f0[i]) / sc;
    d2 += q * q;
  }
  d2 = std::sqrt(d2 / n) / h0;

  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100.0 * h0, h1, t_end});
}

struct StopGrid {
  std::vector<double> targets;
  std::size_t next = 0;

  StopGrid(const std::vector<double>& samples, double t_end) {
    std::set<double> s;
    for (double t : samples) {
      if (t > 0.0 && t < t_end) s.insert(t);
    }
    s.insert(t_end);
    targets.assign(s.begin(), s.end());
  }

  double upcoming(double t) {
    while (next < targets.size() && targets[next] <= t) ++next;
    return next < targets.size() ? targets[next] : targets.back();
  }
};

class Recorder {
 public:
  Recorder(const EventSystem& sys, const SimOptions& opts, Trajectory& traj)
      : sys_(sys), opts_(opts), traj_(traj) {}

  void add(double t, const RealVector& x, const RealVector& f) {
    StepRecord rec;
    rec.min_component = x.size() == 0 ? 0.0 : x.minCoeff();
    rec.rhs_norm = f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
    if (opts_.lyapunov_ref) {
      rec.lyapunov = lyapunov_value(sys_, *opts_.lyapunov_ref, x).value;
    }
    traj_.times.push_back(t);
    traj_.states.push_back(x);
    traj_.monitors.push_back(std::move(rec));
  }

 private:
  const EventSystem& sys_;
  const SimOptions& opts_;
  Trajectory& traj_;
};

bool equilibrium_reached(const MassActionField& field, const EventSystem& sys,
                         const RealVector& x, const RealVector& f, double tol) {
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff()) * sys.max_rate();
  return f.cwiseAbs().maxCoeff() <= tol * scale;
}

// One implicit midpoint step solved by Newton; false when Newton stalls.
bool midpoint_step(const MassActionField& field, const RealVector& x, double h,
                   RealVector& out) {
  const Index n = x.size();
  RealVector z = x + h * field.rhs(x);
  for (int it = 0; it < 25; ++it) {
    const RealVector mid = 0.5 * (x + z);
    const RealVector residual = z - x - h * field.rhs(mid);
    if (residual.cwiseAbs().maxCoeff() <=
        1e-13 * (1.0 + z.cwiseAbs().maxCoeff())) {
      out = z;
      return true;
    }
    RealMatrix j = RealMatrix::Identity(n, n) - (h / 2.0) * field.jacobian(mid);
    z += j.partialPivLu().solve(-residual);
    if (!z.allFinite()) return false;
  }
  return false;
}

}  // namespace

Trajectory integrate(const EventSystem& sys, const RealVector& x0, const SimOptions& opts) {
  if (x0.size() != sys.dimension()) throw DimensionError("initial state dimension mismatch");
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0))
    throw DomainError("tolerances must be positive");
  if (opts.t_end < 0.0) throw DomainError("t_end must be non-negative");
  for (Index i = 0; i < x0.size(); ++i) {
    if (!(x0[i] >= 0.0)) throw DomainError("initial state must be non-negative");
  }

  const MassActionField field(sys);
  Trajectory traj;
  Recorder record(sys, opts, traj);

  RealVector x = x0;
  RealVector f = field.rhs(x);
  double t = 0.0;
  record.add(t, x, f);

  if (opts.stop_at_equilibrium &&
      equilibrium_reached(field, sys, x, f, opts.equilibrium_tol)) {
    traj.status = SimStatus::ReachedEquilibrium;
    return traj;
  }
  if (opts.t_end == 0.0) {
    traj.status = SimStatus::ReachedTEnd;
    return traj;
  }

  StopGrid grid(opts.sample_times, opts.t_end);
  const bool rk45 = opts.method == IntegrationMethod::DormandPrince45;

  double h = initial_step(field, x, f, opts.rel_tol, opts.abs_tol, opts.t_end);
  double facold = 1e-4;
  bool last_rejected = false;

  const Index n = x.size();
  RealVector k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), xnew(n), err(n);

  while (t < opts.t_end) {
    if (traj.steps_accepted + traj.steps_rejected >= opts.max_steps) {
      traj.status = SimStatus::MaxStepsExceeded;
      traj.diagnostic = "step budget exhausted at t = " + format_double(t);
      return traj;
    }

    const double target = grid.upcoming(t);
    bool hit_target = false;
    if (t + h >= target - 1e-14 * std::max(1.0, std::abs(target))) {
      h = target - t;
      hit_target = true;
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      traj.status = SimStatus::StepUnderflow;
      traj.diagnostic = "step size underflow at t = " + format_double(t) +
                        "; last state retained";
      return traj;
    }

    double err_norm_value = 0.0;
    bool solver_ok = true;
    if (rk45) {
      k2 = field.rhs(x + h * (kDP5A21 * f));
      k3 = field.rhs(x + h * (kDP5A31 * f + kDP5A32 * k2));
      k4 = field.rhs(x + h * (kDP5A41 * f + kDP5A42 * k2 + kDP5A43 * k3));
      k5 = field.rhs(x + h * (kDP5A51 * f + kDP5A52 * k2 + kDP5A53 * k3 + kDP5A54 * k4));
      k6 = field.rhs(x + h * (kDP5A61 * f + kDP5A62 * k2 + kDP5A63 * k3 + kDP5A64 * k4 +
                              kDP5A65 * k5));
      xnew = x + h * (kDP5B1 * f + kDP5B3 * k3 + kDP5B4 * k4 + kDP5B5 * k5 + kDP5B6 * k6);
      k7 = field.rhs(xnew);
      err = h * (kDP5E1 * f + kDP5E3 * k3 + kDP5E4 * k4 + kDP5E5 * k5 + kDP5E6 * k6 +
                 kDP5E7 * k7);
      err_norm_value = error_norm(err, x, xnew, opts.rel_tol, opts.abs_tol);
    } else {
      RealVector full(n), half(n), two(n);
      solver_ok = midpoint_step(field, x, h, full) &&
                  midpoint_step(field, x, h / 2.0, half) &&
                  midpoint_step(field, half, h / 2.0, two);
      if (solver_ok) {
        xnew = two;
        err = (full - two) / 3.0;
        err_norm_value = error_norm(err, x, xnew, opts.rel_tol, opts.abs_tol);
      }
    }

    bool reject = !solver_ok || !xnew.allFinite() || err_norm_value > 1.0;

    if (!reject && opts.negativity == NegativityPolicy::Reject && xnew.minCoeff() < 0.0) {
      reject = true;
      // Tiny violations at an already-minimal step are floored instead of
      // failing; anything larger keeps halving.
      if (h <= 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)) &&
          xnew.minCoeff() >= -opts.abs_tol) {
        for (Index i = 0; i < n; ++i) {
          if (xnew[i] < 0.0) {
            xnew[i] = 0.0;
            ++traj.clamped_components;
          }
        }
        reject = false;
      }
    }

    if (reject) {
      ++traj.steps_rejected;
      last_rejected = true;
      if (!solver_ok || !xnew.allFinite() ||
          (opts.negativity == NegativityPolicy::Reject && xnew.minCoeff() < 0.0)) {
        h *= 0.5;
      } else {
        const double fac11 = std::pow(err_norm_value, 0.17);
        h /= std::min(5.0, fac11 / 0.9);
      }
      continue;
    }

    if (opts.negativity == NegativityPolicy::Clamp) {
      for (Index i = 0; i < n; ++i) {
        if (xnew[i] < 0.0) {
          xnew[i] = 0.0;
          ++traj.clamped_components;
        }
      }
    }

    t = hit_target ? target : t + h;
    x = xnew;
    if (rk45) {
      f = k7;
      if (opts.negativity == NegativityPolicy::Clamp && traj.clamped_components > 0) {
        f = field.rhs(x);
      }
    } else {
      f = field.rhs(x);
    }
    ++traj.steps_accepted;
    record.add(t, x, f);

    if (opts.stop_at_equilibrium &&
        equilibrium_reached(field, sys, x, f, opts.equilibrium_tol)) {
      traj.status = SimStatus::ReachedEquilibrium;
      return traj;
    }

    const double order_exp = rk45 ? 0.17 : 1.0 / 3.0;
    const double beta = rk45 ? 0.04 : 0.0;
    const double e = std::max(err_norm_value, 1e-10);
    double fac = std::pow(e, order_exp) / std::pow(facold, beta);
    fac = std::max(0.1, std::min(5.0, fac / 0.9));
    double hnew = h / fac;
    if (last_rejected) hnew = std::min(hnew, h);
    last_rejected = false;
    facold = std::max(err_norm_value, 1e-4);
    h = hnew;
  }

  traj.status = SimStatus::ReachedTEnd;
  return traj;
}

EquilibriumReach simulate_to_equilibrium(const EventSystem& sys, const RealVector& x0,
                                         const SimOptions& opts) {
  for (Index i = 0; i < x0.size(); ++i) {
    if (!(x0[i] > 0.0))
      throw DomainError("equilibrium search needs a strictly positive start");
  }
  SimOptions inner = opts;
  inner.stop_at_equilibrium = true;
  // The state error plateaus at the step-control tolerance, so the residual
  // threshold is reachable only when the integration runs tighter than it.
  inner.rel_tol = std::min(opts.rel_tol, opts.equilibrium_tol * 1e-2);
  inner.abs_tol = std::min(opts.abs_tol, opts.equilibrium_tol * 1e-2);
  EquilibriumReach out;
  out.trajectory = integrate(sys, x0, inner);
  out.state = out.trajectory.states.back();
  out.reached = out.trajectory.status == SimStatus::ReachedEquilibrium;
  return out;
}

MonitorReport run_monitors(const EventSystem& sys, const std::optional<RealVector>& c,
                           const Trajectory& traj) {
  if (traj.states.empty()) throw DomainError("empty trajectory");
  MonitorReport report;
  report.clamped_components = traj.clamped_components;
  report.min_component = std::numeric_limits<double>::infinity();
  report.max_component = -std::numeric_limits<double>::infinity();
  for (const RealVector& x : traj.states) {
    report.min_component = std::min(report.min_component, x.minCoeff());
    report.max_component = std::max(report.max_component, x.maxCoeff());
  }
  report.final_rhs_norm = traj.monitors.back().rhs_norm;

  const KernelBasis kernel = right_kernel(stoichiometric_matrix(sys));
  report.conservation_drift.assign(static_cast<std::size_t>(kernel.count()), 0.0);
  for (Index k = 0; k < kernel.count(); ++k) {
    const RealVector v = kernel.vectors.col(k).cast<double>();
    const double v0 = v.dot(traj.states.front());
    double worst = 0.0;
    for (const RealVector& x : traj.states) {
      worst = std::max(worst, std::abs(v.dot(x) - v0));
    }
    report.conservation_drift[static_cast<std::size_t>(k)] = worst;
    report.max_conservation_drift = std::max(report.max_conservation_drift, worst);
  }

  if (c) {
    double worst_jump = 0.0;
    double previous = lyapunov_value(sys, *c, traj.states.front()).value;
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
      const double g = lyapunov_value(sys, *c, traj.states[i]).value;
      worst_jump = std::max(worst_jump, g - previous);
      previous = g;
    }
    report.max_lyapunov_increase = worst_jump;
  }
  return report;
}

std::string format_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

void write_trajectory_csv(std::ostream& os, const EventSystem& sys, const Trajectory& traj,
                          const std::optional<RealVector>& c) {
  os << 't';
  for (const std::string& name : sys.species()) os << ',' << name;
  os << ",lyapunov,rhs_norm\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    os << format_double(traj.times[i]);
    const RealVector& x = traj.states[i];
    for (Index k = 0; k < x.size(); ++k) os << ',' << format_double(x[k]);
    if (c) {
      os << ',' << format_double(lyapunov_value(sys, *c, x).value);
    } else if (traj.monitors[i].lyapunov) {
      os << ',' << format_double(*traj.monitors[i].lyapunov);
    } else {
      os << ",nan";
    }
    os << ',' << format_double(traj.monitors[i].rhs_norm) << '\n';
  }
}

}  // namespace evsys
