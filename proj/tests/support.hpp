#ifndef UTPM_TESTS_SUPPORT_HPP
#define UTPM_TESTS_SUPPORT_HPP

// Shared helpers for the test binaries: conditioned random instances,
// finite-difference harnesses and small dense oracles. Everything here is
// test-only and independent of the library's internal computation paths.

#include <cmath>
#include <utility>
#include <vector>

#include "utpm/linalg.hpp"
#include "utpm/matrix.hpp"
#include "utpm/rng.hpp"
#include "utpm/taylor_matrix.hpp"

namespace utpm_test {

using utpm::Matrix;
using utpm::Rng;
using utpm::TaylorMatrix;
using utpm::TaylorScalar;

/// Square polynomial whose degree-0 coefficient is safely invertible.
inline TaylorMatrix well_conditioned(Rng& rng, std::size_t degree, std::size_t n) {
  TaylorMatrix x = utpm::tp_smul(0.3, rng.taylor(degree, n, n));
  x.add_to_coeff(0, Matrix::identity(n));
  return x;
}

/// Rectangular polynomial (m >= n) with full column rank at degree 0.
inline TaylorMatrix full_rank_rect(Rng& rng, std::size_t degree, std::size_t m,
                                   std::size_t n) {
  TaylorMatrix x = rng.taylor(degree, m, n);
  Matrix bump(m, n);
  for (std::size_t i = 0; i < n; ++i) bump(i, i) = 3.0;
  x.add_to_coeff(0, bump);
  return x;
}

/// Symmetric polynomial with well-separated degree-0 eigenvalues.
inline TaylorMatrix separated_symmetric(Rng& rng, std::size_t degree, std::size_t n) {
  TaylorMatrix x = rng.symmetric_taylor(degree, n);
  Matrix spread(n, n);
  for (std::size_t i = 0; i < n; ++i) spread(i, i) = 3.0 * static_cast<double>(i + 1);
  x.add_to_coeff(0, spread);
  return x;
}

/// x + h * xdot, coefficient-wise.
inline TaylorMatrix shift(const TaylorMatrix& x, const TaylorMatrix& xdot, double h) {
  return utpm::tp_add(x, utpm::tp_smul(h, xdot));
}

/// Central finite difference of a TaylorMatrix-valued map along the full
/// coefficient-array direction xdot.
template <typename F>
TaylorMatrix central_difference(F&& f, const TaylorMatrix& x, const TaylorMatrix& xdot,
                                double h) {
  const TaylorMatrix plus = f(shift(x, xdot, h));
  const TaylorMatrix minus = f(shift(x, xdot, -h));
  return utpm::tp_smul(1.0 / (2.0 * h), utpm::tp_sub(plus, minus));
}

/// Central finite difference of a scalar function of one matrix, entry by
/// entry: the gradient oracle.
template <typename F>
Matrix fd_gradient(F&& f, const Matrix& x, double h) {
  Matrix g(x.rows(), x.cols());
  Matrix work = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double saved = work(i, j);
      work(i, j) = saved + h;
      const double fp = f(work);
      work(i, j) = saved - h;
      const double fm = f(work);
      work(i, j) = saved;
      g(i, j) = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

/// Determinant through LU with partial pivoting (test-side oracle).
inline double determinant(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix w = a;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(w(i, k)) > std::abs(w(p, k))) p = i;
    }
    if (w(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w(k, j), w(p, j));
      det = -det;
    }
    det *= w(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = w(i, k) / w(k, k);
      for (std::size_t j = k; j < n; ++j) w(i, j) -= factor * w(k, j);
    }
  }
  return det;
}

/// Polynomial pairing tr([bar]^T [dot]) used by dot tests.
inline TaylorScalar pairing(const TaylorMatrix& bar, const TaylorMatrix& dot) {
  return utpm::tp_trace(utpm::tp_mul(utpm::tp_transpose(bar), dot));
}

/// Relative defect between two pairing polynomials.
inline double pairing_error(const TaylorScalar& lhs, const TaylorScalar& rhs) {
  return utpm::max_abs_diff(lhs, rhs) /
         std::max({1.0, utpm::max_abs(lhs), utpm::max_abs(rhs)});
}

}  // namespace utpm_test

#endif  // UTPM_TESTS_SUPPORT_HPP
