#include "utpm/matrix.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace utpm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": operand shapes differ");
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("Matrix: data length does not match rows*cols");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "sub");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix r = a;
  r += b;
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix r = a;
  r -= b;
  return r;
}

Matrix operator-(const Matrix& a) {
  Matrix r = a;
  r *= -1.0;
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("mul: inner dimensions disagree");
  }
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        r(i, j) += aik * b(k, j);
      }
    }
  }
  return r;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix r = a;
  r *= s;
  return r;
}

Matrix operator*(const Matrix& a, double s) { return s * a; }

Matrix transpose(const Matrix& a) {
  Matrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  }
  return r;
}

double trace(const Matrix& a) {
  const std::size_t n = a.rows() < a.cols() ? a.rows() : a.cols();
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t += a(i, i);
  return t;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix r = a;
  for (std::size_t k = 0; k < r.data().size(); ++k) r.data()[k] *= b.data()[k];
  return r;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  }
  return m;
}

bool all_finite(const Matrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool is_upper_triangular(const Matrix& a) {
  for (std::size_t i = 1; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < std::min(i, a.cols()); ++j) {
      if (a(i, j) != 0.0) return false;
    }
  }
  return true;
}

bool is_lower_triangular(const Matrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) return false;
    }
  }
  return true;
}

double singular_pivot_threshold(double max_abs_value) {
  return 1e3 * std::numeric_limits<double>::epsilon() * max_abs_value;
}

LuDecomposition::LuDecomposition(const Matrix& a) : lu_(a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("lu: matrix must be square");
  }
  const std::size_t n = a.rows();
  const double tol = singular_pivot_threshold(max_abs(a));
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double pivot_mag = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(lu_(i, k));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (pivot_mag <= tol) {
      throw SingularMatrixError("lu: pivot below singularity threshold");
    }
    if (pivot_row != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu_(k, j), lu_(pivot_row, j));
      }
      std::swap(perm_[k], perm_[pivot_row]);
    }
    const double inv_pivot = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu_(i, k) * inv_pivot;
      lu_(i, k) = factor;
      for (std::size_t j = k + 1; j < n; ++j) {
        lu_(i, j) -= factor * lu_(k, j);
      }
    }
  }
}

Matrix LuDecomposition::solve(const Matrix& b) const {
  const std::size_t n = lu_.rows();
  if (b.rows() != n) {
    throw ShapeError("lu solve: right-hand side rows disagree");
  }
  Matrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(perm_[i], j);
  }
  // L y = P b (unit lower triangular)
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const double l = lu_(i, k);
      if (l == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= l * x(k, j);
    }
  }
  // U x = y
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double u = lu_(ii, k);
      if (u == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) x(ii, j) -= u * x(k, j);
    }
    const double inv_pivot = 1.0 / lu_(ii, ii);
    for (std::size_t j = 0; j < x.cols(); ++j) x(ii, j) *= inv_pivot;
  }
  return x;
}

Matrix solve_upper_triangular(const Matrix& r, const Matrix& b) {
  if (r.rows() != r.cols()) {
    throw ShapeError("triangular solve: matrix must be square");
  }
  if (b.rows() != r.rows()) {
    throw ShapeError("triangular solve: right-hand side rows disagree");
  }
  const std::size_t n = r.rows();
  const double tol = singular_pivot_threshold(max_abs(r));
  Matrix x = b;
  for (std::size_t ii = n; ii-- > 0;) {
    if (std::abs(r(ii, ii)) <= tol) {
      throw SingularMatrixError("triangular solve: diagonal entry below threshold");
    }
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double u = r(ii, k);
      if (u == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) x(ii, j) -= u * x(k, j);
    }
    const double inv_pivot = 1.0 / r(ii, ii);
    for (std::size_t j = 0; j < x.cols(); ++j) x(ii, j) *= inv_pivot;
  }
  return x;
}

Matrix solve_lower_triangular(const Matrix& l, const Matrix& b) {
  if (l.rows() != l.cols()) {
    throw ShapeError("triangular solve: matrix must be square");
  }
  if (b.rows() != l.rows()) {
    throw ShapeError("triangular solve: right-hand side rows disagree");
  }
  const std::size_t n = l.rows();
  const double tol = singular_pivot_threshold(max_abs(l));
  Matrix x = b;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(l(i, i)) <= tol) {
      throw SingularMatrixError("triangular solve: diagonal entry below threshold");
    }
    for (std::size_t k = 0; k < i; ++k) {
      const double v = l(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= v * x(k, j);
    }
    const double inv_pivot = 1.0 / l(i, i);
    for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) *= inv_pivot;
  }
  return x;
}

}  // namespace utpm
