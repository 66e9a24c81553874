#pragma once

#include <optional>

#include "evsys/event_system.hpp"
#include "evsys/exact_linalg.hpp"

namespace evsys {

struct EquilibriumOptions {
  double grad_tol = 1e-12;
  int max_iterations = 200;
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  double polish_tol = 1e-12;
};

struct EquilibriumResult {
  RealVector point;
  /// max_j |e_j(point)| / (1 + sigma_j lo_j(point) + tau_j hi_j(point)).
  double detailed_balance_residual = 0.0;
  /// max over kernel vectors v of |v.(point - p)|, scaled as in
  /// same_conservation_class.
  double class_residual = 0.0;
  int iterations = 0;
  EquilibriumOptions options;
};

/// Scaled detailed-balance residual at x.
double detailed_balance_residual(const EventSystem& sys, const RealVector& x);

/// A positive point where every event vanishes, from the minimum-norm
/// least-squares solve of Gamma * alpha = ln(sigma/tau) in log space.
/// Throws NaturalityError when no such point exists.
RealVector base_strong_equilibrium(const EventSystem& sys,
                                   const EquilibriumOptions& options = {});

/// The unique positive detailed-balance point in p's conservation class,
/// reached by Newton on the strictly convex objective
///   phi(y) = sum_i c*_i exp((K y)_i) - p . (K y)
/// over coefficients y of the right-kernel basis K.
EquilibriumResult class_equilibrium(const EventSystem& sys, const RealVector& c_star,
                                    const RealVector& p,
                                    const EquilibriumOptions& options = {});

/// phi and its gradient, exposed for testing against finite differences.
double class_objective(const RealVector& c_star, const RealMatrix& kernel,
                       const RealVector& p, const RealVector& y);
RealVector class_objective_gradient(const RealVector& c_star, const RealMatrix& kernel,
                                    const RealVector& p, const RealVector& y);

struct LyapunovValue {
  double value = 0.0;
  std::optional<RealVector> gradient;
};

/// Extended Lyapunov function at x relative to the positive detailed-balance
/// point c: sum of x_i(ln x_i - 1 - ln c_i) + c_i, where a zero component
/// contributes c_i. The gradient ln(x_i/c_i) is returned only for positive x.
LyapunovValue lyapunov_value(const EventSystem& sys, const RealVector& c,
                             const RealVector& x);

/// Derivative of the Lyapunov function along the flow at positive x, in the
/// closed form sum_j e_j(x) * ln(tau_j hi_j(x) / (sigma_j lo_j(x))).
/// Always <= 0, with equality exactly at detailed balance.
double orbital_derivative(const EventSystem& sys, const RealVector& c,
                          const RealVector& x);

}  // namespace evsys
