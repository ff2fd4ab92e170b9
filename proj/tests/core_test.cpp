#include <doctest.h>

#include <limits>
#include <sstream>
#include <vector>

#include "support.hpp"
#include "utpm/errors.hpp"
#include "utpm/taylor_matrix.hpp"

using namespace utpm;
using namespace utpm_test;

namespace {

// Element-wise scalar-polynomial oracle for the matrix product: every output
// entry is a sum of scalar Taylor convolutions, computed entry by entry with
// plain loops over an untruncated scratch polynomial.
TaylorMatrix oracle_mul(const TaylorMatrix& x, const TaylorMatrix& y, std::size_t out_degree) {
  TaylorMatrix z(out_degree, x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < y.cols(); ++j) {
      std::vector<double> acc(x.degree_count() + y.degree_count() - 1, 0.0);
      for (std::size_t k = 0; k < x.cols(); ++k) {
        for (std::size_t c = 0; c < x.degree_count(); ++c) {
          for (std::size_t e = 0; e < y.degree_count(); ++e) {
            acc[c + e] += x.at(c, i, k) * y.at(e, k, j);
          }
        }
      }
      for (std::size_t d = 0; d < out_degree && d < acc.size(); ++d) {
        z.at(d, i, j) = acc[d];
      }
    }
  }
  return z;
}

TaylorMatrix oracle_hadamard(const TaylorMatrix& x, const TaylorMatrix& y) {
  TaylorMatrix z(x.degree_count(), x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      for (std::size_t c = 0; c < x.degree_count(); ++c) {
        for (std::size_t e = 0; e < y.degree_count(); ++e) {
          if (c + e < z.degree_count()) {
            z.at(c + e, i, j) += x.at(c, i, j) * y.at(e, i, j);
          }
        }
      }
    }
  }
  return z;
}

}  // namespace

TEST_CASE("tp_add basics and element-wise oracle") {
  const TaylorMatrix zero(2, 2, 2);
  CHECK(tp_add(zero, zero) == zero);

  Rng rng(11);
  const TaylorMatrix x = rng.taylor(3, 2, 2);
  CHECK(max_abs(tp_add(x, tp_neg(x))) == 0.0);

  const TaylorMatrix y = rng.taylor(3, 2, 2);
  TaylorMatrix expected(3, 2, 2);
  for (std::size_t d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        expected.at(d, i, j) = x.at(d, i, j) + y.at(d, i, j);
      }
    }
  }
  CHECK(tp_add(x, y) == expected);

  CHECK_THROWS_AS(tp_add(x, rng.taylor(3, 2, 3)), ShapeError);
  CHECK_THROWS_AS(tp_add(x, rng.taylor(2, 2, 2)), DegreeError);
}

TEST_CASE("tp_mul ring identity, truncation, convolution oracle") {
  Rng rng(12);
  const TaylorMatrix x = rng.taylor(4, 2, 3);
  CHECK(max_abs_diff(tp_mul(x.truncated(4), TaylorMatrix::identity(4, 3)), x) == 0.0);

  // (t I)(t I) at D=2: truncation kills t^2.
  TaylorMatrix ti(2, 3, 3);
  ti.set_coeff(1, Matrix::identity(3));
  CHECK(max_abs(tp_mul(ti, ti)) == 0.0);

  const TaylorMatrix y = rng.taylor(4, 3, 2);
  CHECK(max_abs_diff(tp_mul(x, y), oracle_mul(x, y, 4)) <= 1e-14);
}

TEST_CASE("tp_mul_window definition, hand case, extended oracle") {
  Rng rng(13);
  const TaylorMatrix x = rng.taylor(3, 2, 2);
  const TaylorMatrix y = rng.taylor(3, 2, 2);
  CHECK(max_abs_diff(tp_mul_window(x, y, 0, 3), tp_mul(x, y)) == 0.0);

  // x = I + I t, window [2,3) of x*x is the t^2 coefficient of (1+t)^2 = I.
  TaylorMatrix one_plus_t(2, 2, 2);
  one_plus_t.set_coeff(0, Matrix::identity(2));
  one_plus_t.set_coeff(1, Matrix::identity(2));
  const TaylorMatrix sq = tp_mul_window(one_plus_t, one_plus_t, 2, 3);
  CHECK(max_abs_diff(sq.coeff(0), Matrix::identity(2)) == 0.0);

  const TaylorMatrix full = oracle_mul(x, y, 5);
  const TaylorMatrix window = tp_mul_window(x, y, 3, 5);
  for (std::size_t d = 0; d < 2; ++d) {
    CHECK(max_abs_diff(window.coeff(d), full.coeff(3 + d)) <= 1e-14);
  }

  CHECK_THROWS_AS(tp_mul_window(x, y, 3, 3), WindowError);
  CHECK_THROWS_AS(tp_mul_window(x, y, 0, 6), WindowError);
}

TEST_CASE("transpose, trace, hadamard, smul") {
  Rng rng(14);
  const TaylorMatrix x = rng.taylor(3, 3, 3);

  const TaylorScalar tr_eye = tp_trace(TaylorMatrix::identity(3, 4));
  CHECK(tr_eye.at(0, 0, 0) == 4.0);
  CHECK(tr_eye.at(1, 0, 0) == 0.0);

  CHECK(tp_transpose(tp_transpose(x)) == x);

  const TaylorMatrix y = rng.taylor(3, 3, 3);
  CHECK(max_abs_diff(tp_hadamard(x, y), oracle_hadamard(x, y)) <= 1e-14);

  // Scalar-polynomial multiplication against the 1x1-matrix product route.
  const TaylorScalar a = rng.taylor(3, 1, 1);
  TaylorMatrix expected(3, 3, 3);
  for (std::size_t d = 0; d < 3; ++d) {
    Matrix acc(3, 3);
    for (std::size_t c = 0; c <= d; ++c) {
      acc += a.at(c, 0, 0) * x.coeff(d - c);
    }
    expected.set_coeff(d, acc);
  }
  CHECK(max_abs_diff(tp_smul(a, x), expected) <= 1e-14);
}

TEST_CASE("tp_inv identities and residual") {
  CHECK(max_abs_diff(tp_inv(TaylorMatrix::identity(3, 4)),
                     TaylorMatrix::identity(3, 4)) == 0.0);

  TaylorMatrix two_eye(2, 3, 3);
  two_eye.set_coeff(0, 2.0 * Matrix::identity(3));
  const TaylorMatrix half = tp_inv(two_eye);
  CHECK(max_abs_diff(half.coeff(0), 0.5 * Matrix::identity(3)) == 0.0);
  CHECK(max_abs(half.coeff(1)) == 0.0);

  Rng rng(15);
  const TaylorMatrix x = well_conditioned(rng, 4, 4);
  CHECK(max_abs_diff(tp_mul(x, tp_inv(x)), TaylorMatrix::identity(4, 4)) <= 1e-12);

  TaylorMatrix singular(2, 3, 3);  // zero degree-0 coefficient
  singular.set_coeff(1, Matrix::identity(3));
  CHECK_THROWS_AS(tp_inv(singular), SingularMatrixError);
}

TEST_CASE("tp_solve identities, triangular path") {
  Rng rng(16);
  const TaylorMatrix b = rng.taylor(3, 4, 2);
  CHECK(max_abs_diff(tp_solve(TaylorMatrix::identity(3, 4), b), b) == 0.0);

  const TaylorMatrix a = well_conditioned(rng, 3, 4);
  CHECK(max_abs_diff(tp_solve(a, TaylorMatrix::identity(3, 4)), tp_inv(a)) == 0.0);
  CHECK(max_abs_diff(tp_mul(a, tp_solve(a, b)), b) <= 1e-12);

  // Upper-triangular path: residual plus exactness of the zero triangle when
  // the right-hand side is upper triangular too.
  TaylorMatrix tri = mask_strict_upper(rng.taylor(3, 4, 4));
  tri.add_to_coeff(0, 2.0 * Matrix::identity(4));
  const TaylorMatrix sol = tp_solve(tri, b);
  CHECK(max_abs_diff(tp_mul(tri, sol), b) <= 1e-12);

  TaylorMatrix tri_rhs = mask_strict_upper(rng.taylor(3, 4, 4));
  tri_rhs.add_to_coeff(0, Matrix::identity(4));
  CHECK(max_abs(mask_strict_lower(tp_solve(tri, tri_rhs))) == 0.0);
}

TEST_CASE("masks partition and lemma 1 enumeration oracle") {
  CHECK(max_abs(mask_strict_lower(TaylorMatrix::identity(2, 4))) == 0.0);

  Rng rng(17);
  const TaylorMatrix x = rng.taylor(3, 4, 4);
  CHECK(tp_add(tp_add(mask_strict_lower(x), mask_strict_upper(x)), mask_diag(x)) == x);

  // Lemma: transpose of the strict-lower selection equals the strict-upper
  // selection of the transpose, checked entry by entry.
  const TaylorMatrix lhs = tp_transpose(mask_strict_lower(x));
  const TaylorMatrix xt = tp_transpose(x);
  for (std::size_t d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        const double expected = i < j ? xt.at(d, i, j) : 0.0;
        CHECK(lhs.at(d, i, j) == expected);
      }
    }
  }

  CHECK_THROWS_AS(mask_diag(rng.taylor(2, 3, 4)), ShapeError);
}

TEST_CASE("tp_eval Horner against naive power summation") {
  Rng rng(18);
  const TaylorMatrix x = rng.taylor(4, 3, 2);
  CHECK(max_abs_diff(tp_eval(x, 0.0), x.coeff(0)) == 0.0);

  const TaylorMatrix c = TaylorMatrix::constant(rng.matrix(3, 2), 4);
  CHECK(max_abs_diff(tp_eval(c, 0.7), c.coeff(0)) == 0.0);

  const double t = -0.37;
  Matrix naive(3, 2);
  double power = 1.0;
  for (std::size_t d = 0; d < 4; ++d) {
    naive += power * x.coeff(d);
    power *= t;
  }
  CHECK(max_abs_diff(tp_eval(x, t), naive) <= 1e-15);
}

TEST_CASE("ring axioms on random instances") {
  Rng rng(19);
  for (int rep = 0; rep < 50; ++rep) {
    const TaylorMatrix x = rng.taylor(3, 3, 3);
    const TaylorMatrix y = rng.taylor(3, 3, 3);
    const TaylorMatrix z = rng.taylor(3, 3, 3);
    const double scale = std::max({1.0, max_abs(x), max_abs(y), max_abs(z)});
    CHECK(max_abs_diff((x * y) * z, x * (y * z)) <= 1e-13 * scale * scale * scale);
    CHECK(max_abs_diff(x * (y + z), x * y + x * z) <= 1e-13 * scale * scale);
    CHECK(tp_add(x, TaylorMatrix(3, 3, 3)) == x);
  }
}

TEST_CASE("lemma suite: antisymmetric split and diagonal commutator") {
  Rng rng(20);
  for (int rep = 0; rep < 50; ++rep) {
    const TaylorMatrix a = rng.taylor(3, 4, 4);
    const TaylorMatrix anti = a - tp_transpose(a);
    CHECK(max_abs_diff(anti, mask_strict_lower(anti) -
                                 tp_transpose(mask_strict_lower(anti))) == 0.0);

    const TaylorMatrix b = rng.taylor(3, 4, 4);
    const TaylorMatrix c = rng.taylor(3, 4, 4);
    CHECK(max_abs_diff(tp_trace(tp_transpose(a) * tp_hadamard(b, c)),
                       tp_trace(tp_transpose(c) * tp_hadamard(b, a))) <= 1e-13);

    TaylorMatrix diag(3, 4, 4);
    for (std::size_t d = 0; d < 3; ++d) {
      for (std::size_t k = 0; k < 4; ++k) diag.at(d, k, k) = rng.uniform();
    }
    CHECK(max_abs(mask_diag(diag * anti - anti * diag)) == 0.0);
  }
}

TEST_CASE("truncation consistency is exact") {
  Rng rng(21);
  const TaylorMatrix x = rng.taylor(5, 3, 3);
  const TaylorMatrix y = rng.taylor(5, 3, 3);
  for (std::size_t dd = 1; dd < 5; ++dd) {
    CHECK(tp_mul(x, y).truncated(dd) == tp_mul(x.truncated(dd), y.truncated(dd)));
    CHECK(tp_hadamard(x, y).truncated(dd) ==
          tp_hadamard(x.truncated(dd), y.truncated(dd)));
  }
  const TaylorMatrix w = well_conditioned(rng, 5, 3);
  for (std::size_t dd = 1; dd < 5; ++dd) {
    CHECK(tp_inv(w).truncated(dd) == tp_inv(w.truncated(dd)));
  }
}

TEST_CASE("utpm-txt serialization") {
  Rng rng(22);
  TaylorMatrix x = rng.taylor(3, 2, 3);
  x.at(0, 0, 0) = 1.0 / 3.0;  // needs all 17 digits
  x.at(1, 1, 2) = -7.25e-300;

  const std::string text = to_utpm_txt(x);
  CHECK(text.rfind("utpm 3 2 3\n", 0) == 0);
  CHECK(parse_utpm_txt(text) == x);

  std::istringstream bad_header("utmp 1 2 2\n1 2\n3 4\n");
  CHECK_THROWS_AS(read_utpm_txt(bad_header), ParseError);
  std::istringstream truncated_body("utpm 1 2 2\n1 2\n3\n");
  CHECK_THROWS_AS(read_utpm_txt(truncated_body), ParseError);
  std::istringstream nan_body("utpm 1 1 1\nnan\n");
  CHECK_THROWS_AS(read_utpm_txt(nan_body), ParseError);
}

TEST_CASE("finiteness and degree conversions") {
  Rng rng(23);
  TaylorMatrix x = rng.taylor(2, 2, 2);
  Matrix bad(2, 2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(x.set_coeff(0, bad), Error);

  const TaylorMatrix ext = x.extended(4);
  CHECK(ext.degree_count() == 4);
  CHECK(max_abs(ext.coeff(3)) == 0.0);
  CHECK(ext.truncated(2) == x);
  CHECK_THROWS_AS(x.truncated(3), DegreeError);
  CHECK_THROWS_AS(x.truncated(0), DegreeError);
}
