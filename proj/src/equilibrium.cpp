#include "evsys/equilibrium.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "evsys/analysis.hpp"

namespace evsys {

namespace {

void require_dimension(const EventSystem& sys, const RealVector& x, const char* what) {
  if (x.size() != sys.dimension()) {
    throw DimensionError(std::string(what) + " dimension does not match the system");
  }
}

void require_positive(const RealVector& x, const char* what) {
  for (Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw DomainError(std::string(what) + " must be strictly positive");
  }
}

RealVector log_rate_vector(const EventSystem& sys) {
  RealVector b(static_cast<Index>(sys.event_count()));
  for (std::size_t j = 0; j < sys.event_count(); ++j) {
    const Event& e = sys.event(j);
    b[static_cast<Index>(j)] = e.sigma.log() - e.tau.log();
  }
  return b;
}

}  // namespace

double detailed_balance_residual(const EventSystem& sys, const RealVector& x) {
  require_dimension(sys, x, "point");
  double worst = 0.0;
  for (const Event& e : sys.events()) {
    const double a = e.sigma.to_double() * evaluate(e.lo, x);
    const double b = e.tau.to_double() * evaluate(e.hi, x);
    worst = std::max(worst, std::abs(a - b) / (1.0 + a + b));
  }
  return worst;
}

RealVector base_strong_equilibrium(const EventSystem& sys, const EquilibriumOptions& options) {
  const NaturalityVerdict verdict = wegscheider_check(sys);
  if (!verdict.natural) {
    throw NaturalityError(
        "system is not detailed balanced; no positive point zeroes every event");
  }

  const IntMatrix gamma = stoichiometric_matrix(sys);
  const RealVector b = log_rate_vector(sys);
  LeastSquares ls = least_squares_solve(gamma, b);

  // One round of iterative refinement absorbs the round-off from the float
  // logs of rational rates.
  RealVector c = ls.alpha.array().exp();
  if (detailed_balance_residual(sys, c) > options.polish_tol) {
    const RealMatrix g = gamma.cast<double>();
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(g);
    ls.alpha += cod.solve(b - g * ls.alpha);
    c = ls.alpha.array().exp();
  }
  return c;
}

double class_objective(const RealVector& c_star, const RealMatrix& kernel,
                       const RealVector& p, const RealVector& y) {
  const RealVector mu = kernel * y;
  double value = 0.0;
  for (Index i = 0; i < c_star.size(); ++i) value += c_star[i] * std::exp(mu[i]);
  value -= p.dot(mu);
  return value;
}

RealVector class_objective_gradient(const RealVector& c_star, const RealMatrix& kernel,
                                    const RealVector& p, const RealVector& y) {
  const RealVector w = (c_star.array() * (kernel * y).array().exp()).matrix();
  return kernel.transpose() * (w - p);
}

EquilibriumResult class_equilibrium(const EventSystem& sys, const RealVector& c_star,
                                    const RealVector& p, const EquilibriumOptions& options) {
  require_dimension(sys, c_star, "base point");
  require_dimension(sys, p, "class point");
  require_positive(c_star, "base point");
  if (classify_point(p) != PointClass::Positive) {
    throw DomainError("class point must be positive (positive conservation class)");
  }

  const IntMatrix gamma = stoichiometric_matrix(sys);
  const KernelBasis kernel = right_kernel(gamma);

  EquilibriumResult result;
  result.options = options;

  auto finish = [&](const RealVector& point, int iterations) {
    result.point = point;
    result.iterations = iterations;
    result.detailed_balance_residual = detailed_balance_residual(sys, point);
    result.class_residual = 0.0;
    const double mag = std::max(point.cwiseAbs().maxCoeff(), p.cwiseAbs().maxCoeff());
    for (Index k = 0; k < kernel.count(); ++k) {
      const RealVector v = kernel.vectors.col(k).cast<double>();
      const double drift =
          std::abs(v.dot(point - p)) / (1.0 + v.cwiseAbs().sum() * mag);
      result.class_residual = std::max(result.class_residual, drift);
    }
    return result;
  };

  if (kernel.count() == 0) {
    // A single conservation class; the base point is the answer.
    return finish(c_star, 0);
  }

  const RealMatrix k = kernel.vectors.cast<double>();
  RealVector y = RealVector::Zero(kernel.count());
  const double stop = options.grad_tol * (1.0 + p.cwiseAbs().maxCoeff());

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const RealVector w = (c_star.array() * (k * y).array().exp()).matrix();
    const RealVector grad = k.transpose() * (w - p);
    if (grad.cwiseAbs().maxCoeff() <= stop) break;

    const RealMatrix hess = k.transpose() * w.asDiagonal() * k;
    Eigen::LLT<RealMatrix> llt(hess);
    if (llt.info() != Eigen::Success) {
      throw NumericError("class equilibrium Hessian is not positive definite");
    }
    const RealVector step = llt.solve(-grad);

    const double phi0 = class_objective(c_star, k, p, y);
    const double slope = grad.dot(step);
    // Near the optimum the true decrease sinks below the evaluation
    // round-off of phi; the acceptance test carries that noise floor.
    const double noise =
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(phi0));
    double t = 1.0;
    int backtracks = 0;
    while (true) {
      const double phi = class_objective(c_star, k, p, y + t * step);
      if (std::isfinite(phi) && phi <= phi0 + options.armijo_c1 * t * slope + noise) break;
      t *= options.backtrack_factor;
      if (++backtracks > 60) {
        throw NumericError("class equilibrium line search failed to make progress");
      }
    }
    y += t * step;
  }
  if (iter >= options.max_iterations) {
    const RealVector grad = class_objective_gradient(c_star, k, p, y);
    throw NumericError("class equilibrium Newton did not converge in " +
                       std::to_string(options.max_iterations) +
                       " iterations; |grad|_inf = " +
                       std::to_string(grad.cwiseAbs().maxCoeff()));
  }

  const RealVector point = (c_star.array() * (k * y).array().exp()).matrix();
  return finish(point, iter);
}

LyapunovValue lyapunov_value(const EventSystem& sys, const RealVector& c,
                             const RealVector& x) {
  require_dimension(sys, c, "equilibrium point");
  require_dimension(sys, x, "point");
  require_positive(c, "equilibrium point");

  LyapunovValue out;
  bool all_positive = true;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || std::isnan(x[i])) {
      throw DomainError("Lyapunov function needs a non-negative point");
    }
    if (x[i] == 0.0) {
      all_positive = false;
      out.value += c[i];
    } else {
      out.value += x[i] * (std::log(x[i]) - 1.0 - std::log(c[i])) + c[i];
    }
  }
  if (all_positive) {
    out.gradient = (x.array() / c.array()).log().matrix();
  }
  return out;
}

double orbital_derivative(const EventSystem& sys, const RealVector& c,
                          const RealVector& x) {
  require_dimension(sys, c, "equilibrium point");
  require_dimension(sys, x, "point");
  require_positive(c, "equilibrium point");
  require_positive(x, "point");

  double total = 0.0;
  for (const Event& e : sys.events()) {
    const double a = e.sigma.to_double() * evaluate(e.lo, x);
    const double b = e.tau.to_double() * evaluate(e.hi, x);
    const double d = a - b;
    if (d == 0.0) continue;
    // (a-b) * ln(b/a), written through log1p for accuracy near balance.
    total += d * std::log1p(-d / a);
  }
  return total;
}

}  // namespace evsys
