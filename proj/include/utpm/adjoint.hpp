#ifndef UTPM_ADJOINT_HPP
#define UTPM_ADJOINT_HPP

#include <utility>

#include "utpm/taylor_matrix.hpp"

namespace utpm {

// Reverse-mode pullbacks for the elementary matrix operations, lifted to
// truncated Taylor polynomials by running the first-order adjoint formulas
// in ring arithmetic. Every pullback takes the output adjoint plus whatever
// primal values it needs and returns the input-adjoint CONTRIBUTION; the
// caller accumulates contributions additively (fan-out means several
// contributions per value).

/// Z = X Y:  Xbar += Zbar Y^T,  Ybar += X^T Zbar.
std::pair<TaylorMatrix, TaylorMatrix> pb_mul(const TaylorMatrix& zbar,
                                             const TaylorMatrix& x,
                                             const TaylorMatrix& y);

/// Y = X^{-1}:  Xbar += -Y^T Ybar Y^T  (y is the saved primal inverse).
TaylorMatrix pb_inv(const TaylorMatrix& ybar, const TaylorMatrix& y);

/// Y = X^T:  Xbar += Ybar^T.
TaylorMatrix pb_transpose(const TaylorMatrix& ybar);

/// y = tr(X):  Xbar += ybar * I_n  (ybar is a 1 x 1 polynomial).
TaylorMatrix pb_trace(const TaylorScalar& ybar, std::size_t n);

/// Z = X o Y:  Xbar += Zbar o Y,  Ybar += Zbar o X.
std::pair<TaylorMatrix, TaylorMatrix> pb_hadamard(const TaylorMatrix& zbar,
                                                  const TaylorMatrix& x,
                                                  const TaylorMatrix& y);

/// Z = s X with s a 1 x 1 polynomial: sbar += tr(Zbar^T X), Xbar += s Zbar.
std::pair<TaylorScalar, TaylorMatrix> pb_smul(const TaylorMatrix& zbar,
                                              const TaylorScalar& s,
                                              const TaylorMatrix& x);

/// C = solve(A, B):  Bbar = solve(A^T, Cbar),  Abar = -Bbar C^T
/// (c is the saved primal solution).
std::pair<TaylorMatrix, TaylorMatrix> pb_solve(const TaylorMatrix& cbar,
                                               const TaylorMatrix& a,
                                               const TaylorMatrix& c);

/// Q, R = qr(A):
///   Abar += Q (Rbar + P_L o (R Rbar^T - Rbar R^T + Q^T Qbar - Qbar^T Q) R^{-T})
///           + (Qbar - Q Q^T Qbar) R^{-T}.
/// For square A the trailing term vanishes identically and is skipped.
TaylorMatrix pb_qr(const TaylorMatrix& qbar, const TaylorMatrix& rbar,
                   const TaylorMatrix& q, const TaylorMatrix& r);

namespace detail {
/// The full formula including the trailing term, regardless of shape; the
/// square fast path must agree with this to round-off.
TaylorMatrix pb_qr_general(const TaylorMatrix& qbar, const TaylorMatrix& rbar,
                           const TaylorMatrix& q, const TaylorMatrix& r);
}  // namespace detail

/// Q, Lam = eigh(A):
///   H_ij = ([lambda_j] - [lambda_i])^{-1} (i != j, zero diagonal),
///   Abar += Q (1I o Lambar + H o (Q^T Qbar)) Q^T.
/// Only the diagonal of lambar participates. With symmetrize set, returns
/// (Abar + Abar^T)/2 for callers that guarantee symmetric upstream use;
/// either form pairs identically against symmetric tangents.
TaylorMatrix pb_eigh(const TaylorMatrix& qbar, const TaylorMatrix& lambar,
                     const TaylorMatrix& q, const TaylorMatrix& lam,
                     bool symmetrize = false);

}  // namespace utpm

#endif  // UTPM_ADJOINT_HPP
