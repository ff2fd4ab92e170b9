#include "utpm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace utpm {

namespace {

// Window [lo, lo+len) of the untruncated product x*y, zero-padded where the
// window reaches past the highest product coefficient (happens for E = D).
TaylorMatrix padded_mul_window(const TaylorMatrix& x, const TaylorMatrix& y,
                               std::size_t lo, std::size_t len) {
  const std::size_t max_hi = x.degree_count() + y.degree_count() - 1;
  const std::size_t hi = std::min(lo + len, max_hi);
  if (lo >= hi) {
    return TaylorMatrix(len, x.rows(), y.cols());
  }
  TaylorMatrix w = tp_mul_window(x, y, lo, hi);
  return hi - lo == len ? w : w.extended(len);
}

// Coefficients [lo, lo+len) of x as a fresh degree-len value.
TaylorMatrix slice_coeffs(const TaylorMatrix& x, std::size_t lo, std::size_t len) {
  TaylorMatrix z(len, x.rows(), x.cols());
  for (std::size_t d = 0; d < len; ++d) {
    z.set_coeff(d, x.coeff(lo + d));
  }
  return z;
}

// [x coefficients..., dx coefficients...] as one value.
TaylorMatrix append_coeffs(const TaylorMatrix& x, const TaylorMatrix& dx) {
  TaylorMatrix z = x.extended(x.degree_count() + dx.degree_count());
  for (std::size_t d = 0; d < dx.degree_count(); ++d) {
    z.set_coeff(x.degree_count() + d, dx.coeff(d));
  }
  return z;
}

void zero_strict_lower(TaylorMatrix& x) {
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    for (std::size_t i = 1; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < std::min(i, x.cols()); ++j) {
        x.at(d, i, j) = 0.0;
      }
    }
  }
}

void check_extend_arguments(const TaylorMatrix& a, const TaylorMatrix& q_known,
                            const TaylorMatrix& r_known, std::size_t e, const char* op) {
  const std::size_t d = q_known.degree_count();
  if (e == 0 || e > d) {
    throw DegreeError(std::string(op) + ": extension size must satisfy 1 <= E <= D");
  }
  if (r_known.degree_count() != d) {
    throw DegreeError(std::string(op) + ": known factors carry different degree counts");
  }
  if (a.degree_count() != d + e) {
    throw DegreeError(std::string(op) + ": input must carry exactly D+E coefficients");
  }
}

double max_asymmetry(const TaylorMatrix& a) {
  double m = 0.0;
  for (std::size_t d = 0; d < a.degree_count(); ++d) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = i + 1; j < a.cols(); ++j) {
        m = std::max(m, std::abs(a.at(d, i, j) - a.at(d, j, i)));
      }
    }
  }
  return m;
}

}  // namespace

double eigenvalue_separation_tolerance(double scale) {
  return 1e-8 * std::max(1.0, scale);
}

std::pair<Matrix, Matrix> base_qr(const Matrix& a0) {
  const std::size_t m = a0.rows();
  const std::size_t n = a0.cols();
  if (m < n) {
    throw ShapeError("base_qr: input must have at least as many rows as columns");
  }

  // Householder reduction, reflectors kept for the backward accumulation.
  Matrix w = a0;
  std::vector<std::vector<double>> reflectors(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm_sq = 0.0;
    for (std::size_t i = k; i < m; ++i) norm_sq += w(i, k) * w(i, k);
    const double norm = std::sqrt(norm_sq);
    std::vector<double>& v = reflectors[k];
    v.assign(m - k, 0.0);
    if (norm == 0.0) continue;  // zero column, caught by the rank check below

    const double alpha = w(k, k) >= 0.0 ? -norm : norm;
    v[0] = w(k, k) - alpha;
    for (std::size_t i = k + 1; i < m; ++i) v[i - k] = w(i, k);
    double v_norm_sq = 0.0;
    for (double vi : v) v_norm_sq += vi * vi;
    if (v_norm_sq == 0.0) continue;
    const double scale = 2.0 / v_norm_sq;

    // w[k:, k:] -= scale * v (v^T w[k:, k:])
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * w(i, j);
      dot *= scale;
      for (std::size_t i = k; i < m; ++i) w(i, j) -= dot * v[i - k];
    }
  }

  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) r(i, j) = w(i, j);
  }

  // Thin q: apply the reflectors to the leading columns of the identity,
  // last reflector first.
  Matrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    const std::vector<double>& v = reflectors[kk];
    double v_norm_sq = 0.0;
    for (double vi : v) v_norm_sq += vi * vi;
    if (v_norm_sq == 0.0) continue;
    const double scale = 2.0 / v_norm_sq;
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = kk; i < m; ++i) dot += v[i - kk] * q(i, j);
      dot *= scale;
      for (std::size_t i = kk; i < m; ++i) q(i, j) -= dot * v[i - kk];
    }
  }

  // Positive-diagonal convention.
  for (std::size_t i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      for (std::size_t j = i; j < n; ++j) r(i, j) = -r(i, j);
      for (std::size_t k = 0; k < m; ++k) q(k, i) = -q(k, i);
    }
  }

  const double tol = singular_pivot_threshold(max_abs(a0));
  for (std::size_t i = 0; i < n; ++i) {
    if (r(i, i) <= tol) {
      throw RankDeficientError("base_qr: diagonal of r below rank threshold");
    }
  }
  return {q, r};
}

std::pair<Matrix, Matrix> base_eigh(const Matrix& a0) {
  const std::size_t n = a0.rows();
  if (n != a0.cols()) {
    throw ShapeError("base_eigh: input must be square");
  }
  const double scale = max_abs(a0);
  if (max_abs_diff(a0, transpose(a0)) > 1e-10 * std::max(1.0, scale)) {
    throw AsymmetricInputError("base_eigh: input is not symmetric");
  }

  // Cyclic Jacobi sweeps. Each rotation zeroes one off-diagonal pair; the
  // off-diagonal mass decays quadratically once sweeps settle.
  Matrix b = 0.5 * (a0 + transpose(a0));
  Matrix v = Matrix::identity(n);
  const double off_tol = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off_max = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        off_max = std::max(off_max, std::abs(b(p, q)));
      }
    }
    if (off_max <= off_tol) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double bpq = b(p, q);
        if (std::abs(bpq) <= off_tol) continue;
        const double theta = (b(q, q) - b(p, p)) / (2.0 * bpq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double bkp = b(k, p);
          const double bkq = b(k, q);
          b(k, p) = c * bkp - s * bkq;
          b(k, q) = s * bkp + c * bkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double bpk = b(p, k);
          const double bqk = b(q, k);
          b(p, k) = c * bpk - s * bqk;
          b(q, k) = s * bpk + c * bqk;
        }
        b(p, q) = 0.0;
        b(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Ascending eigenvalue order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return b(i, i) < b(j, j); });

  Matrix q(n, n);
  Matrix lam(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    lam(col, col) = b(src, src);
    for (std::size_t k = 0; k < n; ++k) q(k, col) = v(k, src);
  }

  // Deterministic sign: largest-magnitude entry of each eigenvector positive.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(q(k, col)) > best) {
        best = std::abs(q(k, col));
        arg = k;
      }
    }
    if (q(arg, col) < 0.0) {
      for (std::size_t k = 0; k < n; ++k) q(k, col) = -q(k, col);
    }
  }

  const double sep_tol = eigenvalue_separation_tolerance(scale);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (lam(i + 1, i + 1) - lam(i, i) <= sep_tol) {
      throw DegenerateEigenvalues("base_eigh: eigenvalue gap below separation tolerance");
    }
  }
  return {q, lam};
}

std::pair<TaylorMatrix, TaylorMatrix> qr_extend(const TaylorMatrix& a,
                                                const TaylorMatrix& q_known,
                                                const TaylorMatrix& r_known,
                                                std::size_t e) {
  check_extend_arguments(a, q_known, r_known, e, "qr_extend");
  if (a.rows() != q_known.rows() || a.cols() != q_known.cols() ||
      r_known.rows() != a.cols() || r_known.cols() != a.cols()) {
    throw ShapeError("qr_extend: factor shapes do not match the input");
  }
  const std::size_t d = q_known.degree_count();

  // Residuals of the known factors at degrees D..D+E-1.
  const TaylorMatrix qt = tp_transpose(q_known);
  const TaylorMatrix delta_f = padded_mul_window(q_known, r_known, d, e);
  const TaylorMatrix delta_g = padded_mul_window(qt, q_known, d, e);
  const TaylorMatrix delta_a = slice_coeffs(a, d, e);

  const TaylorMatrix h = delta_a - delta_f;
  const TaylorMatrix s = tp_smul(-0.5, delta_g);

  // Truncations of the known factors to the first E coefficients.
  const TaylorMatrix q_e = q_known.truncated(e);
  const TaylorMatrix qt_e = qt.truncated(e);
  const TaylorMatrix r_e = r_known.truncated(e);
  const TaylorMatrix r_inv_e = tp_inv(r_e);

  // Strict lower part of the antisymmetric X, then the full X via
  // X = P_L o X - (P_L o X)^T.
  const TaylorMatrix pl_x =
      mask_strict_lower(qt_e * h * r_inv_e) - mask_strict_lower(s);
  const TaylorMatrix x = pl_x - tp_transpose(pl_x);

  const TaylorMatrix k = s + x;
  TaylorMatrix dr = qt_e * h - k * r_e;
  zero_strict_lower(dr);  // upper triangular by construction, to round-off
  const TaylorMatrix dq = (h - q_e * dr) * r_inv_e;
  return {dq, dr};
}

QrFactors qr_pushforward(const TaylorMatrix& a, std::size_t target_degree) {
  if (target_degree == 0 || target_degree > a.degree_count()) {
    throw DegreeError("qr_pushforward: target degree out of range");
  }
  auto [q0, r0] = base_qr(a.coeff(0));
  TaylorMatrix q = TaylorMatrix::constant(q0, 1);
  TaylorMatrix r = TaylorMatrix::constant(r0, 1);
  std::size_t current = 1;
  while (current < target_degree) {
    const std::size_t e = std::min(current, target_degree - current);
    auto [dq, dr] = qr_extend(a.truncated(current + e), q, r, e);
    q = append_coeffs(q, dq);
    r = append_coeffs(r, dr);
    current += e;
  }
  return {q, r};
}

std::pair<TaylorMatrix, TaylorMatrix> eigh_extend(const TaylorMatrix& a,
                                                  const TaylorMatrix& q_known,
                                                  const TaylorMatrix& lam_known,
                                                  std::size_t e) {
  check_extend_arguments(a, q_known, lam_known, e, "eigh_extend");
  const std::size_t n = a.rows();
  if (a.cols() != n || q_known.rows() != n || q_known.cols() != n ||
      lam_known.rows() != n || lam_known.cols() != n) {
    throw ShapeError("eigh_extend: input and factors must be square of one size");
  }
  if (max_asymmetry(a) > 1e-10 * std::max(1.0, max_abs(a))) {
    throw AsymmetricInputError("eigh_extend: input is not coefficient-wise symmetric");
  }
  const std::size_t d = q_known.degree_count();

  // Residuals of the known factors at degrees D..D+E-1. The triple product
  // window needs the low coefficients of q^T a as an intermediate.
  const TaylorMatrix qt = tp_transpose(q_known);
  const TaylorMatrix a_low = a.truncated(d);
  const TaylorMatrix qta = padded_mul_window(qt, a_low, 0, d + e);
  const TaylorMatrix delta_f = padded_mul_window(qta, q_known, d, e);
  const TaylorMatrix delta_g = padded_mul_window(qt, q_known, d, e);
  const TaylorMatrix delta_a = slice_coeffs(a, d, e);

  const TaylorMatrix s = tp_smul(-0.5, delta_g);

  const TaylorMatrix q_e = q_known.truncated(e);
  const TaylorMatrix qt_e = qt.truncated(e);
  const TaylorMatrix lam_e = lam_known.truncated(e);

  const TaylorMatrix k =
      delta_f + qt_e * delta_a * q_e + s * lam_e + lam_e * s;
  const TaylorMatrix dlam = mask_diag(k);

  // H_ij = ([lambda_j] - [lambda_i])^{-1} as a full polynomial reciprocal.
  const double sep_tol = eigenvalue_separation_tolerance(max_abs(a.coeff(0)));
  TaylorMatrix h(e, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      TaylorScalar gap(e, 1, 1);
      for (std::size_t c = 0; c < e; ++c) {
        gap.at(c, 0, 0) = lam_e.at(c, j, j) - lam_e.at(c, i, i);
      }
      if (std::abs(gap.at(0, 0, 0)) <= sep_tol) {
        throw DegenerateEigenvalues("eigh_extend: eigenvalue gap below separation tolerance");
      }
      const TaylorScalar rec = tp_inv(gap);
      for (std::size_t c = 0; c < e; ++c) {
        h.at(c, i, j) = rec.at(c, 0, 0);
      }
    }
  }

  const TaylorMatrix dq = q_e * (tp_hadamard(h, k - dlam) + s);
  return {dq, dlam};
}

EighFactors eigh_pushforward(const TaylorMatrix& a, std::size_t target_degree) {
  if (target_degree == 0 || target_degree > a.degree_count()) {
    throw DegreeError("eigh_pushforward: target degree out of range");
  }
  auto [q0, lam0] = base_eigh(a.coeff(0));
  TaylorMatrix q = TaylorMatrix::constant(q0, 1);
  TaylorMatrix lam = TaylorMatrix::constant(lam0, 1);
  std::size_t current = 1;
  while (current < target_degree) {
    const std::size_t e = std::min(current, target_degree - current);
    auto [dq, dlam] = eigh_extend(a.truncated(current + e), q, lam, e);
    q = append_coeffs(q, dq);
    lam = append_coeffs(lam, dlam);
    current += e;
  }
  return {q, lam};
}

}  // namespace utpm
