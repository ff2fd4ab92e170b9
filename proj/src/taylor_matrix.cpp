#include "utpm/taylor_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

namespace utpm {

namespace {

void require_same_shape(const TaylorMatrix& x, const TaylorMatrix& y, const char* op) {
  if (!x.same_shape(y)) {
    throw ShapeError(std::string(op) + ": operand shapes differ");
  }
}

void require_same_degree(const TaylorMatrix& x, const TaylorMatrix& y, const char* op) {
  if (x.degree_count() != y.degree_count()) {
    throw DegreeError(std::string(op) + ": operand degree counts differ");
  }
}

void require_scalar(const TaylorMatrix& x, const char* op) {
  if (!x.is_scalar()) {
    throw ShapeError(std::string(op) + ": expected a 1x1 polynomial");
  }
}

// Accumulates x_c * y_k into out coefficient d (raw GEMM on the flat buffers).
void accumulate_product(TaylorMatrix& out, std::size_t d, const TaylorMatrix& x,
                        std::size_t c, const TaylorMatrix& y, std::size_t k) {
  const std::size_t m = x.rows();
  const std::size_t inner = x.cols();
  const std::size_t n = y.cols();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < inner; ++p) {
      const double xv = x.at(c, i, p);
      if (xv == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out.at(d, i, j) += xv * y.at(k, p, j);
      }
    }
  }
}

}  // namespace

TaylorMatrix::TaylorMatrix(std::size_t degree_count, std::size_t rows, std::size_t cols)
    : degree_count_(degree_count), rows_(rows), cols_(cols),
      data_(degree_count * rows * cols, 0.0) {
  if (degree_count == 0 || rows == 0 || cols == 0) {
    throw ShapeError("TaylorMatrix: degree count and dimensions must be positive");
  }
}

TaylorMatrix TaylorMatrix::constant(const Matrix& value, std::size_t degree_count) {
  TaylorMatrix x(degree_count, value.rows(), value.cols());
  x.set_coeff(0, value);
  return x;
}

TaylorMatrix TaylorMatrix::identity(std::size_t degree_count, std::size_t n) {
  return constant(Matrix::identity(n), degree_count);
}

TaylorMatrix TaylorMatrix::from_coeffs(const std::vector<Matrix>& coeffs) {
  if (coeffs.empty()) {
    throw DegreeError("from_coeffs: at least one coefficient required");
  }
  TaylorMatrix x(coeffs.size(), coeffs[0].rows(), coeffs[0].cols());
  for (std::size_t d = 0; d < coeffs.size(); ++d) {
    if (!coeffs[d].same_shape(coeffs[0])) {
      throw ShapeError("from_coeffs: coefficient shapes differ");
    }
    x.set_coeff(d, coeffs[d]);
  }
  return x;
}

Matrix TaylorMatrix::coeff(std::size_t d) const {
  Matrix m(rows_, cols_);
  const double* src = data_.data() + d * rows_ * cols_;
  std::copy(src, src + rows_ * cols_, m.data().begin());
  return m;
}

void TaylorMatrix::set_coeff(std::size_t d, const Matrix& value) {
  if (value.rows() != rows_ || value.cols() != cols_) {
    throw ShapeError("set_coeff: coefficient shape differs");
  }
  if (!utpm::all_finite(value)) {
    throw Error("set_coeff: coefficient has non-finite entries");
  }
  std::copy(value.data().begin(), value.data().end(),
            data_.begin() + static_cast<std::ptrdiff_t>(d * rows_ * cols_));
}

void TaylorMatrix::add_to_coeff(std::size_t d, const Matrix& value) {
  if (value.rows() != rows_ || value.cols() != cols_) {
    throw ShapeError("add_to_coeff: coefficient shape differs");
  }
  double* dst = data_.data() + d * rows_ * cols_;
  for (std::size_t k = 0; k < rows_ * cols_; ++k) dst[k] += value.data()[k];
}

TaylorMatrix TaylorMatrix::truncated(std::size_t new_degree_count) const {
  if (new_degree_count == 0 || new_degree_count > degree_count_) {
    throw DegreeError("truncated: new degree count out of range");
  }
  TaylorMatrix x(new_degree_count, rows_, cols_);
  std::copy(data_.begin(),
            data_.begin() + static_cast<std::ptrdiff_t>(new_degree_count * rows_ * cols_),
            x.data_.begin());
  return x;
}

TaylorMatrix TaylorMatrix::extended(std::size_t new_degree_count) const {
  if (new_degree_count < degree_count_) {
    throw DegreeError("extended: new degree count smaller than current");
  }
  TaylorMatrix x(new_degree_count, rows_, cols_);
  std::copy(data_.begin(), data_.end(), x.data_.begin());
  return x;
}

TaylorMatrix tp_add(const TaylorMatrix& x, const TaylorMatrix& y) {
  require_same_shape(x, y, "tp_add");
  require_same_degree(x, y, "tp_add");
  TaylorMatrix z = x;
  for (std::size_t k = 0; k < z.data().size(); ++k) z.data()[k] += y.data()[k];
  return z;
}

TaylorMatrix tp_sub(const TaylorMatrix& x, const TaylorMatrix& y) {
  require_same_shape(x, y, "tp_sub");
  require_same_degree(x, y, "tp_sub");
  TaylorMatrix z = x;
  for (std::size_t k = 0; k < z.data().size(); ++k) z.data()[k] -= y.data()[k];
  return z;
}

TaylorMatrix tp_neg(const TaylorMatrix& x) {
  TaylorMatrix z = x;
  for (double& v : z.data()) v = -v;
  return z;
}

TaylorMatrix tp_mul(const TaylorMatrix& x, const TaylorMatrix& y) {
  if (x.cols() != y.rows()) {
    throw ShapeError("tp_mul: inner dimensions disagree");
  }
  require_same_degree(x, y, "tp_mul");
  const std::size_t degree = x.degree_count();
  TaylorMatrix z(degree, x.rows(), y.cols());
  for (std::size_t d = 0; d < degree; ++d) {
    for (std::size_t c = 0; c <= d; ++c) {
      accumulate_product(z, d, x, c, y, d - c);
    }
  }
  return z;
}

TaylorMatrix tp_mul_window(const TaylorMatrix& x, const TaylorMatrix& y,
                           std::size_t lo, std::size_t hi) {
  if (x.cols() != y.rows()) {
    throw ShapeError("tp_mul_window: inner dimensions disagree");
  }
  if (lo >= hi || hi > x.degree_count() + y.degree_count() - 1) {
    throw WindowError("tp_mul_window: window out of range");
  }
  TaylorMatrix z(hi - lo, x.rows(), y.cols());
  for (std::size_t d = lo; d < hi; ++d) {
    const std::size_t c_min = d >= y.degree_count() ? d - (y.degree_count() - 1) : 0;
    const std::size_t c_max = std::min(d, x.degree_count() - 1);
    for (std::size_t c = c_min; c <= c_max; ++c) {
      accumulate_product(z, d - lo, x, c, y, d - c);
    }
  }
  return z;
}

TaylorMatrix tp_transpose(const TaylorMatrix& x) {
  TaylorMatrix z(x.degree_count(), x.cols(), x.rows());
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        z.at(d, j, i) = x.at(d, i, j);
      }
    }
  }
  return z;
}

TaylorScalar tp_trace(const TaylorMatrix& x) {
  TaylorScalar z(x.degree_count(), 1, 1);
  const std::size_t n = std::min(x.rows(), x.cols());
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += x.at(d, i, i);
    z.at(d, 0, 0) = t;
  }
  return z;
}

TaylorMatrix tp_hadamard(const TaylorMatrix& x, const TaylorMatrix& y) {
  require_same_shape(x, y, "tp_hadamard");
  require_same_degree(x, y, "tp_hadamard");
  TaylorMatrix z(x.degree_count(), x.rows(), x.cols());
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    for (std::size_t c = 0; c <= d; ++c) {
      const std::size_t k = d - c;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
          z.at(d, i, j) += x.at(c, i, j) * y.at(k, i, j);
        }
      }
    }
  }
  return z;
}

TaylorMatrix tp_smul(double a, const TaylorMatrix& x) {
  TaylorMatrix z = x;
  for (double& v : z.data()) v *= a;
  return z;
}

TaylorMatrix tp_smul(const TaylorScalar& a, const TaylorMatrix& x) {
  require_scalar(a, "tp_smul");
  require_same_degree(a, x, "tp_smul");
  TaylorMatrix z(x.degree_count(), x.rows(), x.cols());
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    for (std::size_t c = 0; c <= d; ++c) {
      const double av = a.at(c, 0, 0);
      if (av == 0.0) continue;
      const std::size_t k = d - c;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
          z.at(d, i, j) += av * x.at(k, i, j);
        }
      }
    }
  }
  return z;
}

TaylorMatrix tp_inv(const TaylorMatrix& x) {
  if (x.rows() != x.cols()) {
    throw ShapeError("tp_inv: matrix must be square");
  }
  return tp_solve(x, TaylorMatrix::identity(x.degree_count(), x.rows()));
}

TaylorMatrix tp_solve(const TaylorMatrix& a, const TaylorMatrix& b) {
  if (a.rows() != a.cols()) {
    throw ShapeError("tp_solve: coefficient matrix must be square");
  }
  if (b.rows() != a.rows()) {
    throw ShapeError("tp_solve: right-hand side rows disagree");
  }
  require_same_degree(a, b, "tp_solve");

  const std::size_t degree = a.degree_count();
  const Matrix a0 = a.coeff(0);

  // X_e = A_0^{-1} (B_e - sum_{k=1..e} A_k X_{e-k}); triangular A_0 keeps a
  // substitution path so no fill-in is created outside its triangle.
  enum class Path { kUpper, kLower, kLu };
  Path path = Path::kLu;
  if (is_upper_triangular(a0)) {
    path = Path::kUpper;
  } else if (is_lower_triangular(a0)) {
    path = Path::kLower;
  }
  std::optional<LuDecomposition> lu;
  if (path == Path::kLu) lu.emplace(a0);
  auto solve0 = [&](const Matrix& rhs) {
    switch (path) {
      case Path::kUpper: return solve_upper_triangular(a0, rhs);
      case Path::kLower: return solve_lower_triangular(a0, rhs);
      default: return lu->solve(rhs);
    }
  };

  TaylorMatrix x(degree, b.rows(), b.cols());
  for (std::size_t e = 0; e < degree; ++e) {
    Matrix rhs = b.coeff(e);
    for (std::size_t k = 1; k <= e; ++k) {
      rhs -= a.coeff(k) * x.coeff(e - k);
    }
    Matrix xe = solve0(rhs);
    if (!utpm::all_finite(xe)) {
      throw SingularMatrixError("tp_solve: solve produced non-finite entries");
    }
    x.set_coeff(e, xe);
  }
  return x;
}

TaylorMatrix mask_strict_lower(const TaylorMatrix& x) {
  TaylorMatrix z(x.degree_count(), x.rows(), x.cols());
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    for (std::size_t i = 1; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < std::min(i, x.cols()); ++j) {
        z.at(d, i, j) = x.at(d, i, j);
      }
    }
  }
  return z;
}

TaylorMatrix mask_strict_upper(const TaylorMatrix& x) {
  TaylorMatrix z(x.degree_count(), x.rows(), x.cols());
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = i + 1; j < x.cols(); ++j) {
        z.at(d, i, j) = x.at(d, i, j);
      }
    }
  }
  return z;
}

TaylorMatrix mask_diag(const TaylorMatrix& x) {
  if (x.rows() != x.cols()) {
    throw ShapeError("mask_diag: matrix must be square");
  }
  TaylorMatrix z(x.degree_count(), x.rows(), x.cols());
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      z.at(d, i, i) = x.at(d, i, i);
    }
  }
  return z;
}

Matrix tp_eval(const TaylorMatrix& x, double t) {
  Matrix value = x.coeff(x.degree_count() - 1);
  for (std::size_t d = x.degree_count() - 1; d-- > 0;) {
    value = t * value + x.coeff(d);
  }
  return value;
}

double max_abs(const TaylorMatrix& x) {
  double m = 0.0;
  for (double v : x.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const TaylorMatrix& a, const TaylorMatrix& b) {
  if (!a.same_shape(b) || a.degree_count() != b.degree_count()) {
    throw ShapeError("max_abs_diff: shapes or degree counts differ");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  }
  return m;
}

bool all_finite(const TaylorMatrix& x) {
  for (double v : x.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void write_utpm_txt(std::ostream& os, const TaylorMatrix& x) {
  os << "utpm " << x.degree_count() << ' ' << x.rows() << ' ' << x.cols() << '\n';
  char buf[64];
  for (std::size_t d = 0; d < x.degree_count(); ++d) {
    if (d > 0) os << '\n';
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", x.at(d, i, j));
        if (j > 0) os << ' ';
        os << buf;
      }
      os << '\n';
    }
  }
}

TaylorMatrix read_utpm_txt(std::istream& is) {
  std::string tag;
  std::size_t degree = 0, rows = 0, cols = 0;
  if (!(is >> tag) || tag != "utpm" || !(is >> degree >> rows >> cols)) {
    throw ParseError("utpm-txt: bad header, expected 'utpm <D> <M> <N>'");
  }
  if (degree == 0 || rows == 0 || cols == 0) {
    throw ParseError("utpm-txt: header dimensions must be positive");
  }
  TaylorMatrix x(degree, rows, cols);
  for (std::size_t d = 0; d < degree; ++d) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        double v = 0.0;
        if (!(is >> v)) {
          throw ParseError("utpm-txt: truncated coefficient data");
        }
        if (!std::isfinite(v)) {
          throw ParseError("utpm-txt: non-finite entry");
        }
        x.at(d, i, j) = v;
      }
    }
  }
  return x;
}

std::string to_utpm_txt(const TaylorMatrix& x) {
  std::ostringstream os;
  write_utpm_txt(os, x);
  return os.str();
}

TaylorMatrix parse_utpm_txt(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_utpm_txt(is);
}

}  // namespace utpm
