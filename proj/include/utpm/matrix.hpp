#ifndef UTPM_MATRIX_HPP
#define UTPM_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "utpm/errors.hpp"

namespace utpm {

/// Dense real matrix with row-major storage. Value type: all operations
/// return new matrices, nothing mutates shared state.
class Matrix {
 public:
  Matrix() = default;

  /// Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major data; data.size() must equal rows*cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);  // matrix product
Matrix operator*(double s, const Matrix& a);
Matrix operator*(const Matrix& a, double s);

Matrix transpose(const Matrix& a);
double trace(const Matrix& a);
Matrix hadamard(const Matrix& a, const Matrix& b);

/// Largest entry magnitude; 0 for empty matrices.
double max_abs(const Matrix& a);
/// max_ij |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& a);
bool is_upper_triangular(const Matrix& a);
bool is_lower_triangular(const Matrix& a);

/// LU decomposition with partial pivoting, kept around so several
/// right-hand sides can be solved against one factorization.
class LuDecomposition {
 public:
  /// Factors a square matrix. Throws SingularMatrixError when a pivot
  /// magnitude falls to or below 1e3 * eps * max|a|.
  explicit LuDecomposition(const Matrix& a);

  /// Solves a * x = b for matrix right-hand side b.
  Matrix solve(const Matrix& b) const;

  std::size_t dim() const { return lu_.rows(); }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

/// Back substitution for upper-triangular r (r * x = b). No fill-in below
/// the diagonal is ever touched. Throws SingularMatrixError on tiny pivots.
Matrix solve_upper_triangular(const Matrix& r, const Matrix& b);

/// Forward substitution for lower-triangular l (l * x = b).
Matrix solve_lower_triangular(const Matrix& l, const Matrix& b);

/// Pivot rejection threshold used by every dense solve in the library.
double singular_pivot_threshold(double max_abs_value);

}  // namespace utpm

#endif  // UTPM_MATRIX_HPP
