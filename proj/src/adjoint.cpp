#include "utpm/adjoint.hpp"

#include <cmath>

#include "utpm/linalg.hpp"

namespace utpm {

std::pair<TaylorMatrix, TaylorMatrix> pb_mul(const TaylorMatrix& zbar,
                                             const TaylorMatrix& x,
                                             const TaylorMatrix& y) {
  return {tp_mul(zbar, tp_transpose(y)), tp_mul(tp_transpose(x), zbar)};
}

TaylorMatrix pb_inv(const TaylorMatrix& ybar, const TaylorMatrix& y) {
  const TaylorMatrix yt = tp_transpose(y);
  return tp_neg(yt * ybar * yt);
}

TaylorMatrix pb_transpose(const TaylorMatrix& ybar) { return tp_transpose(ybar); }

TaylorMatrix pb_trace(const TaylorScalar& ybar, std::size_t n) {
  if (!ybar.is_scalar()) {
    throw ShapeError("pb_trace: adjoint must be a 1x1 polynomial");
  }
  return tp_smul(ybar, TaylorMatrix::identity(ybar.degree_count(), n));
}

std::pair<TaylorMatrix, TaylorMatrix> pb_hadamard(const TaylorMatrix& zbar,
                                                  const TaylorMatrix& x,
                                                  const TaylorMatrix& y) {
  return {tp_hadamard(zbar, y), tp_hadamard(zbar, x)};
}

std::pair<TaylorScalar, TaylorMatrix> pb_smul(const TaylorMatrix& zbar,
                                              const TaylorScalar& s,
                                              const TaylorMatrix& x) {
  TaylorScalar sbar = tp_trace(tp_mul(tp_transpose(zbar), x));
  return {sbar, tp_smul(s, zbar)};
}

std::pair<TaylorMatrix, TaylorMatrix> pb_solve(const TaylorMatrix& cbar,
                                               const TaylorMatrix& a,
                                               const TaylorMatrix& c) {
  const TaylorMatrix bbar = tp_solve(tp_transpose(a), cbar);
  return {tp_neg(bbar * tp_transpose(c)), bbar};
}

namespace {

TaylorMatrix pb_qr_impl(const TaylorMatrix& qbar, const TaylorMatrix& rbar,
                        const TaylorMatrix& q, const TaylorMatrix& r,
                        bool include_tail) {
  const TaylorMatrix qt = tp_transpose(q);
  const TaylorMatrix rt = tp_transpose(r);
  const TaylorMatrix r_inv_t = tp_transpose(tp_inv(r));

  const TaylorMatrix inner = r * tp_transpose(rbar) - rbar * rt +
                             qt * qbar - tp_transpose(qbar) * q;
  TaylorMatrix abar = q * (rbar + mask_strict_lower(inner) * r_inv_t);
  if (include_tail) {
    abar = abar + (qbar - q * (qt * qbar)) * r_inv_t;
  }
  return abar;
}

}  // namespace

TaylorMatrix pb_qr(const TaylorMatrix& qbar, const TaylorMatrix& rbar,
                   const TaylorMatrix& q, const TaylorMatrix& r) {
  // For square A the factor Q is orthogonal, so Qbar - Q Q^T Qbar cancels.
  return pb_qr_impl(qbar, rbar, q, r, q.rows() != q.cols());
}

namespace detail {

TaylorMatrix pb_qr_general(const TaylorMatrix& qbar, const TaylorMatrix& rbar,
                           const TaylorMatrix& q, const TaylorMatrix& r) {
  return pb_qr_impl(qbar, rbar, q, r, true);
}

}  // namespace detail

TaylorMatrix pb_eigh(const TaylorMatrix& qbar, const TaylorMatrix& lambar,
                     const TaylorMatrix& q, const TaylorMatrix& lam,
                     bool symmetrize) {
  const std::size_t n = q.rows();
  const std::size_t degree = q.degree_count();
  if (lam.rows() != n || lam.cols() != n || q.cols() != n) {
    throw ShapeError("pb_eigh: factors must be square of one size");
  }

  const double sep_tol = eigenvalue_separation_tolerance(max_abs(lam.coeff(0)));
  TaylorMatrix h(degree, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      TaylorScalar gap(degree, 1, 1);
      for (std::size_t d = 0; d < degree; ++d) {
        gap.at(d, 0, 0) = lam.at(d, j, j) - lam.at(d, i, i);
      }
      if (std::abs(gap.at(0, 0, 0)) <= sep_tol) {
        throw DegenerateEigenvalues("pb_eigh: eigenvalue gap below separation tolerance");
      }
      const TaylorScalar rec = tp_inv(gap);
      for (std::size_t d = 0; d < degree; ++d) {
        h.at(d, i, j) = rec.at(d, 0, 0);
      }
    }
  }

  const TaylorMatrix qt = tp_transpose(q);
  TaylorMatrix abar =
      q * (mask_diag(lambar) + tp_hadamard(h, qt * qbar)) * qt;
  if (symmetrize) {
    abar = tp_smul(0.5, abar + tp_transpose(abar));
  }
  return abar;
}

}  // namespace utpm
