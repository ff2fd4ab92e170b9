#ifndef UTPM_TAYLOR_MATRIX_HPP
#define UTPM_TAYLOR_MATRIX_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "utpm/matrix.hpp"

namespace utpm {

/// Truncated univariate Taylor polynomial with M x N matrix coefficients:
///
///   [X]_D = X_0 + X_1 t + ... + X_{D-1} t^{D-1}
///
/// the element of the factor ring K[t]/t^D K[t] with K the ring of real
/// M x N matrices. degree_count() is the number of stored coefficients D
/// (so the highest stored power is D-1). Coefficient 0 is the value part.
///
/// Storage is one flat buffer with degree as the slowest axis and row-major
/// coefficient blocks; extension schemes append whole coefficient blocks.
/// Values are immutable in the public operation contract: every operation
/// returns a fresh value and the originals are safe to share across threads.
class TaylorMatrix {
 public:
  TaylorMatrix() = default;

  /// Zero polynomial with degree_count coefficients of shape rows x cols.
  TaylorMatrix(std::size_t degree_count, std::size_t rows, std::size_t cols);

  /// Constant polynomial: coefficient 0 = value, the rest zero.
  static TaylorMatrix constant(const Matrix& value, std::size_t degree_count);

  /// Identity constant polynomial of size n.
  static TaylorMatrix identity(std::size_t degree_count, std::size_t n);

  /// Builds from explicit coefficients; all must share one shape, at least
  /// one coefficient, and every entry must be finite.
  static TaylorMatrix from_coeffs(const std::vector<Matrix>& coeffs);

  std::size_t degree_count() const { return degree_count_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }

  double& at(std::size_t d, std::size_t i, std::size_t j) {
    return data_[(d * rows_ + i) * cols_ + j];
  }
  double at(std::size_t d, std::size_t i, std::size_t j) const {
    return data_[(d * rows_ + i) * cols_ + j];
  }

  Matrix coeff(std::size_t d) const;
  void set_coeff(std::size_t d, const Matrix& value);
  void add_to_coeff(std::size_t d, const Matrix& value);

  /// First new_degree_count coefficients (new_degree_count <= D).
  TaylorMatrix truncated(std::size_t new_degree_count) const;

  /// Same value zero-padded to new_degree_count >= D coefficients.
  TaylorMatrix extended(std::size_t new_degree_count) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const TaylorMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const TaylorMatrix& a, const TaylorMatrix& b) = default;

 private:
  std::size_t degree_count_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// 1 x 1 polynomials; shape is validated at the operations that require it.
using TaylorScalar = TaylorMatrix;

// Ring arithmetic. Binary operations require equal shapes (inner dimensions
// for tp_mul) and equal degree counts.

TaylorMatrix tp_add(const TaylorMatrix& x, const TaylorMatrix& y);
TaylorMatrix tp_sub(const TaylorMatrix& x, const TaylorMatrix& y);
TaylorMatrix tp_neg(const TaylorMatrix& x);

/// Truncated product: z_d = sum_{c=0..d} x_c y_{d-c} for d < D.
TaylorMatrix tp_mul(const TaylorMatrix& x, const TaylorMatrix& y);

/// Coefficients lo..hi-1 of the untruncated product of x and y (the inputs
/// may have different degree counts). Out-of-range coefficients of x and y
/// count as zero. Requires lo < hi <= x.degree_count + y.degree_count - 1.
TaylorMatrix tp_mul_window(const TaylorMatrix& x, const TaylorMatrix& y,
                           std::size_t lo, std::size_t hi);

TaylorMatrix tp_transpose(const TaylorMatrix& x);

/// Trace of every coefficient, as a 1 x 1 polynomial.
TaylorScalar tp_trace(const TaylorMatrix& x);

/// Element-wise product, convolved in t: z_d = sum_c x_c o y_{d-c}.
TaylorMatrix tp_hadamard(const TaylorMatrix& x, const TaylorMatrix& y);

/// Constant scale of every coefficient.
TaylorMatrix tp_smul(double a, const TaylorMatrix& x);

/// Scalar-polynomial times matrix-polynomial (truncated convolution);
/// a must be 1 x 1 with the same degree count as x.
TaylorMatrix tp_smul(const TaylorScalar& a, const TaylorMatrix& x);

/// Polynomial inverse of a square x with invertible degree-0 coefficient:
///   B_0 = X_0^{-1},  B_e = -X_0^{-1} sum_{k=1..e} X_k B_{e-k}.
TaylorMatrix tp_inv(const TaylorMatrix& x);

/// Solves a * x = b in the ring:
///   X_e = A_0^{-1} (B_e - sum_{k=1..e} A_k X_{e-k}).
/// When A_0 is exactly upper (or lower) triangular the degree-0 solves use
/// back substitution and never touch the zero triangle.
TaylorMatrix tp_solve(const TaylorMatrix& a, const TaylorMatrix& b);

// Structural masks, applied to every coefficient. New values, no mutation.
TaylorMatrix mask_strict_lower(const TaylorMatrix& x);
TaylorMatrix mask_strict_upper(const TaylorMatrix& x);
TaylorMatrix mask_diag(const TaylorMatrix& x);  // square input

/// Horner evaluation sum_d X_d t^d at a real point.
Matrix tp_eval(const TaylorMatrix& x, double t);

/// Largest entry magnitude over all coefficients.
double max_abs(const TaylorMatrix& x);
double max_abs_diff(const TaylorMatrix& a, const TaylorMatrix& b);
bool all_finite(const TaylorMatrix& x);

// Operator sugar over the named operations.
inline TaylorMatrix operator+(const TaylorMatrix& x, const TaylorMatrix& y) { return tp_add(x, y); }
inline TaylorMatrix operator-(const TaylorMatrix& x, const TaylorMatrix& y) { return tp_sub(x, y); }
inline TaylorMatrix operator-(const TaylorMatrix& x) { return tp_neg(x); }
inline TaylorMatrix operator*(const TaylorMatrix& x, const TaylorMatrix& y) { return tp_mul(x, y); }
inline TaylorMatrix operator*(double a, const TaylorMatrix& x) { return tp_smul(a, x); }

// UTPM-TXT v1 serialization.
//
//   utpm <D> <M> <N>
//   <M lines of N decimal floats>     (coefficient 0)
//                                     (blank line between blocks)
//   ...                               (coefficient D-1)
//
// Numbers are written with 17 significant digits so the round trip is exact.

void write_utpm_txt(std::ostream& os, const TaylorMatrix& x);
TaylorMatrix read_utpm_txt(std::istream& is);
std::string to_utpm_txt(const TaylorMatrix& x);
TaylorMatrix parse_utpm_txt(std::string_view text);

}  // namespace utpm

#endif  // UTPM_TAYLOR_MATRIX_HPP
