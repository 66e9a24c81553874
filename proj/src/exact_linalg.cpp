#include "evsys/exact_linalg.hpp"

#include <Eigen/Dense>

#include <cassert>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <vector>

namespace evsys {

namespace {

using Int128 = __int128;

std::int64_t narrow(Int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw NumericError("integer overflow in exact elimination");
  }
  return static_cast<std::int64_t>(v);
}

struct Echelon {
  IntMatrix u;
  std::vector<Index> pivot_cols;
};

// Fraction-free (Bareiss) forward elimination, pivoting columns left to right
// and taking the first nonzero row. All divisions are exact.
Echelon bareiss(IntMatrix a) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  std::vector<Index> pivots;
  std::int64_t prev = 1;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = -1;
    for (Index i = r; i < rows; ++i) {
      if (a(i, c) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) a.row(p).swap(a.row(r));
    for (Index i = r + 1; i < rows; ++i) {
      for (Index j = c + 1; j < cols; ++j) {
        Int128 t = Int128(a(i, j)) * a(r, c) - Int128(a(i, c)) * a(r, j);
        assert(t % prev == 0);
        a(i, j) = narrow(t / prev);
      }
      a(i, c) = 0;
    }
    prev = a(r, c);
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

IntVector normalize_primitive(std::vector<Rational> x) {
  Int128 lcm = 1;
  for (const Rational& v : x) {
    std::int64_t d = v.den();
    lcm = lcm / gcd64(narrow(lcm), d) * d;
    narrow(lcm);
  }
  const Index n = static_cast<Index>(x.size());
  IntVector w(n);
  for (Index i = 0; i < n; ++i) {
    const Rational& v = x[static_cast<std::size_t>(i)];
    w[i] = narrow(Int128(v.num()) * (lcm / v.den()));
  }
  std::int64_t content = 0;
  for (Index i = 0; i < n; ++i) content = gcd64(content, w[i]);
  if (content > 1) w /= content;
  for (Index i = 0; i < n; ++i) {
    if (w[i] != 0) {
      if (w[i] < 0) w = -w;
      break;
    }
  }
  return w;
}

KernelBasis kernel_of(const IntMatrix& a, KernelSide side) {
  const Index cols = a.cols();
  Echelon ech = bareiss(a);
  const Index rank = static_cast<Index>(ech.pivot_cols.size());

  std::vector<Index> free_cols;
  {
    std::size_t next_pivot = 0;
    for (Index c = 0; c < cols; ++c) {
      if (next_pivot < ech.pivot_cols.size() && ech.pivot_cols[next_pivot] == c) {
        ++next_pivot;
      } else {
        free_cols.push_back(c);
      }
    }
  }

  IntMatrix basis(cols, static_cast<Index>(free_cols.size()));
  for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
    std::vector<Rational> x(static_cast<std::size_t>(cols), Rational(0));
    x[static_cast<std::size_t>(free_cols[fi])] = Rational(1);
    for (Index k = rank - 1; k >= 0; --k) {
      const Index p = ech.pivot_cols[static_cast<std::size_t>(k)];
      Rational s(0);
      for (Index j = p + 1; j < cols; ++j) {
        if (ech.u(k, j) != 0 && !x[static_cast<std::size_t>(j)].is_zero()) {
          s += Rational(ech.u(k, j)) * x[static_cast<std::size_t>(j)];
        }
      }
      x[static_cast<std::size_t>(p)] = -s / Rational(ech.u(k, p));
    }
    basis.col(static_cast<Index>(fi)) = normalize_primitive(std::move(x));
  }
  return KernelBasis{side, std::move(basis)};
}

}  // namespace

Index exact_rank(const IntMatrix& a) {
  return static_cast<Index>(bareiss(a).pivot_cols.size());
}

KernelBasis right_kernel(const IntMatrix& a) { return kernel_of(a, KernelSide::Right); }

KernelBasis left_kernel(const IntMatrix& a) {
  return kernel_of(a.transpose(), KernelSide::Left);
}

bool same_conservation_class(const IntMatrix& gamma, const RealVector& x,
                             const RealVector& y, double tol) {
  if (x.size() != gamma.cols() || y.size() != gamma.cols())
    throw DimensionError("point dimension does not match matrix columns");
  if (tol < 0) throw DomainError("tolerance must be non-negative");
  const KernelBasis kernel = right_kernel(gamma);
  const double mag =
      x.size() == 0 ? 0.0 : std::max(x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff());
  for (Index k = 0; k < kernel.count(); ++k) {
    const RealVector v = kernel.vectors.col(k).cast<double>();
    const double dot = v.dot(x - y);
    const double bound = tol * (1.0 + v.cwiseAbs().sum() * mag);
    if (std::abs(dot) > bound) return false;
  }
  return true;
}

bool same_conservation_class_exact(const IntMatrix& gamma, std::span<const Rational> x,
                                   std::span<const Rational> y) {
  if (static_cast<Index>(x.size()) != gamma.cols() ||
      static_cast<Index>(y.size()) != gamma.cols())
    throw DimensionError("point dimension does not match matrix columns");
  const KernelBasis kernel = right_kernel(gamma);
  for (Index k = 0; k < kernel.count(); ++k) {
    Rational dot(0);
    for (Index i = 0; i < gamma.cols(); ++i) {
      if (kernel.vectors(i, k) != 0) {
        dot += Rational(kernel.vectors(i, k)) *
               (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]);
      }
    }
    if (!dot.is_zero()) return false;
  }
  return true;
}

LeastSquares least_squares_solve(const IntMatrix& gamma, const RealVector& b) {
  if (b.size() != gamma.rows())
    throw DimensionError("right-hand side does not match matrix rows");
  const RealMatrix g = gamma.cast<double>();
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(g);
  LeastSquares out;
  out.alpha = cod.solve(b);
  out.residual = (g * out.alpha - b).norm();
  return out;
}

}  // namespace evsys
