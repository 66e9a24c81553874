#pragma once

#include <span>

#include "evsys/rational.hpp"
#include "evsys/types.hpp"

namespace evsys {

enum class KernelSide { Right, Left };

/// Exact integer kernel basis. Each column is primitive (content 1), has its
/// first nonzero entry positive, and the columns are ordered by the free
/// column they correspond to under left-to-right elimination, so the basis is
/// reproducible.
struct KernelBasis {
  KernelSide side = KernelSide::Right;
  IntMatrix vectors;

  Index count() const { return vectors.cols(); }
};

/// Rank over the rationals, via fraction-free integer elimination.
Index exact_rank(const IntMatrix& a);

/// Basis of { v : a v = 0 }; count() == cols - rank.
KernelBasis right_kernel(const IntMatrix& a);

/// Basis of { v : v^T a = 0 }; count() == rows - rank.
KernelBasis left_kernel(const IntMatrix& a);

/// Whether x and y agree on every primitive conservation law of gamma:
/// |v.(x-y)| <= tol*(1 + |v|_1 * max(|x|_inf, |y|_inf)) for each basis v.
bool same_conservation_class(const IntMatrix& gamma, const RealVector& x,
                             const RealVector& y, double tol = 1e-9);

/// Exact variant for rational points.
bool same_conservation_class_exact(const IntMatrix& gamma, std::span<const Rational> x,
                                   std::span<const Rational> y);

struct LeastSquares {
  RealVector alpha;
  double residual = 0.0;
};

/// Minimum-norm alpha minimizing |gamma*alpha - b|_2, by complete orthogonal
/// decomposition.
LeastSquares least_squares_solve(const IntMatrix& gamma, const RealVector& b);

}  // namespace evsys
