#ifndef UTPM_LINALG_HPP
#define UTPM_LINALG_HPP

#include <utility>

#include "utpm/matrix.hpp"
#include "utpm/taylor_matrix.hpp"

namespace utpm {

/// QR factors of a Taylor value [A] with A coefficients M x N, M >= N:
/// q * r reproduces [A], q^T q is the identity constant, and the strict
/// lower triangle of every r coefficient is exactly zero.
struct QrFactors {
  TaylorMatrix q;  // M x N
  TaylorMatrix r;  // N x N, upper triangular
};

/// Symmetric eigendecomposition factors: q^T [A] q = lam with lam exactly
/// diagonal, q^T q the identity constant, and the degree-0 eigenvalues
/// strictly ascending.
struct EighFactors {
  TaylorMatrix q;    // N x N, orthogonal at degree 0
  TaylorMatrix lam;  // N x N, diagonal
};

/// Separation guard for the eigendecomposition derivative formulas, which
/// divide by eigenvalue gaps.
double eigenvalue_separation_tolerance(double scale);

/// Dense Householder QR of a full-column-rank M x N matrix, M >= N, with
/// the thin M x N orthogonal factor. Sign convention: the diagonal of r is
/// strictly positive. Throws RankDeficientError when a diagonal entry of r
/// falls below threshold.
std::pair<Matrix, Matrix> base_qr(const Matrix& a0);

/// Dense symmetric eigendecomposition by cyclic Jacobi rotations.
/// Eigenvalues ascend along the diagonal of the returned lam0; each
/// eigenvector's largest-magnitude entry is made positive. Throws
/// AsymmetricInputError for asymmetric input and DegenerateEigenvalues when
/// two eigenvalues are closer than the separation tolerance.
std::pair<Matrix, Matrix> base_eigh(const Matrix& a0);

/// One incremental step of the QR push forward: given [A] with D+E
/// coefficients and factors known through degree D (1 <= E <= D), computes
/// the next E coefficients (dq, dr) so that the factors of degree D+E are
/// q_known + dq t^D, r_known + dr t^D. The strict lower triangle of dr is
/// exactly zero.
std::pair<TaylorMatrix, TaylorMatrix> qr_extend(const TaylorMatrix& a,
                                                const TaylorMatrix& q_known,
                                                const TaylorMatrix& r_known,
                                                std::size_t e);

/// Full QR push forward: factorizes coefficient 0, then doubles the known
/// degree with qr_extend (E = min(D_known, D_target - D_known)) until the
/// target degree count is reached. a.degree_count() must be >= target.
QrFactors qr_pushforward(const TaylorMatrix& a, std::size_t target_degree);

/// One incremental step of the symmetric eigendecomposition push forward;
/// mirrors qr_extend. a must be coefficient-wise symmetric; the degree-0
/// eigenvalues must be separated by more than the tolerance.
std::pair<TaylorMatrix, TaylorMatrix> eigh_extend(const TaylorMatrix& a,
                                                  const TaylorMatrix& q_known,
                                                  const TaylorMatrix& lam_known,
                                                  std::size_t e);

/// Full symmetric eigendecomposition push forward with the doubling
/// schedule seeded by base_eigh.
EighFactors eigh_pushforward(const TaylorMatrix& a, std::size_t target_degree);

}  // namespace utpm

#endif  // UTPM_LINALG_HPP
