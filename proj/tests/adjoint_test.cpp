#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "utpm/adjoint.hpp"
#include "utpm/errors.hpp"
#include "utpm/linalg.hpp"

using namespace utpm;
using namespace utpm_test;

namespace {

// Degree-1 tangents of the factorizations through the extension step: stack
// the direction as coefficient 1 and extend the known degree-1 factors.
std::pair<TaylorMatrix, TaylorMatrix> qr_tangent_d1(const TaylorMatrix& a,
                                                    const TaylorMatrix& adot,
                                                    const QrFactors& f) {
  TaylorMatrix curve = a.extended(2);
  curve.set_coeff(1, adot.coeff(0));
  auto [dq, dr] = qr_extend(curve, f.q, f.r, 1);
  return {dq, dr};
}

std::pair<TaylorMatrix, TaylorMatrix> eigh_tangent_d1(const TaylorMatrix& a,
                                                      const TaylorMatrix& adot,
                                                      const EighFactors& f) {
  TaylorMatrix curve = a.extended(2);
  curve.set_coeff(1, adot.coeff(0));
  auto [dq, dlam] = eigh_extend(curve, f.q, f.lam, 1);
  return {dq, dlam};
}

}  // namespace

TEST_CASE("pb_mul trivial and degree-1 dot test") {
  const TaylorMatrix eye = TaylorMatrix::identity(1, 3);
  auto [xbar, ybar] = pb_mul(eye, eye, eye);
  CHECK(max_abs_diff(ybar, eye) == 0.0);
  CHECK(max_abs_diff(xbar, eye) == 0.0);

  Rng rng(51);
  for (int rep = 0; rep < 20; ++rep) {
    const TaylorMatrix x = rng.taylor(1, 3, 3);
    const TaylorMatrix y = rng.taylor(1, 3, 3);
    const TaylorMatrix xdot = rng.taylor(1, 3, 3);
    const TaylorMatrix ydot = rng.taylor(1, 3, 3);
    const TaylorMatrix zdot = xdot * y + x * ydot;
    const TaylorMatrix zbar = rng.taylor(1, 3, 3);
    auto [xb, yb] = pb_mul(zbar, x, y);
    CHECK(pairing_error(pairing(xb, xdot) + pairing(yb, ydot), pairing(zbar, zdot)) <=
          1e-12);
  }
}

TEST_CASE("pb_mul degree-3 pairing against finite-difference tangents") {
  Rng rng(52);
  const TaylorMatrix x = rng.taylor(3, 3, 4);
  const TaylorMatrix y = rng.taylor(3, 4, 2);
  const TaylorMatrix xdot = rng.taylor(3, 3, 4);
  const TaylorMatrix ydot = rng.taylor(3, 4, 2);
  const double h = 1e-5;

  // d/dh of tp_mul(x + h xdot, y + h ydot); both arguments move together.
  const TaylorMatrix zdot = tp_smul(
      1.0 / (2.0 * h), tp_mul(shift(x, xdot, h), shift(y, ydot, h)) -
                           tp_mul(shift(x, xdot, -h), shift(y, ydot, -h)));
  const TaylorMatrix zbar = rng.taylor(3, 3, 2);
  auto [xb, yb] = pb_mul(zbar, x, y);
  CHECK(max_abs_diff(pairing(xb, xdot) + pairing(yb, ydot), pairing(zbar, zdot)) <= 1e-6);
}

TEST_CASE("pb_inv trivial, scalar calculus, dot test") {
  const TaylorMatrix eye = TaylorMatrix::identity(1, 3);
  Rng rng(53);
  const TaylorMatrix g = rng.taylor(1, 3, 3);
  CHECK(max_abs_diff(pb_inv(g, eye), tp_neg(g)) == 0.0);

  TaylorScalar x(1, 1, 1), one(1, 1, 1);
  x.at(0, 0, 0) = 2.0;
  one.at(0, 0, 0) = 1.0;
  const TaylorScalar y = tp_inv(x);
  CHECK(pb_inv(one, y).at(0, 0, 0) == doctest::Approx(-0.25).epsilon(1e-15));

  for (int rep = 0; rep < 20; ++rep) {
    const TaylorMatrix xm = well_conditioned(rng, 1, 3);
    const TaylorMatrix ym = tp_inv(xm);
    const TaylorMatrix xdot = rng.taylor(1, 3, 3);
    const TaylorMatrix ydot = tp_neg(ym * xdot * ym);
    const TaylorMatrix ybar = rng.taylor(1, 3, 3);
    CHECK(pairing_error(pairing(pb_inv(ybar, ym), xdot), pairing(ybar, ydot)) <= 1e-11);
  }
}

TEST_CASE("pb_transpose, pb_trace, pb_hadamard, pb_solve") {
  Rng rng(54);
  CHECK(max_abs_diff(pb_trace(TaylorScalar::identity(1, 1), 3),
                     TaylorMatrix::identity(1, 3)) == 0.0);

  const TaylorMatrix g = rng.taylor(2, 3, 4);
  CHECK(pb_transpose(pb_transpose(g)) == g);

  // Degree-1 dot tests for each.
  for (int rep = 0; rep < 20; ++rep) {
    const TaylorMatrix x = rng.taylor(1, 3, 4);
    const TaylorMatrix xdot = rng.taylor(1, 3, 4);
    const TaylorMatrix ybar = rng.taylor(1, 4, 3);
    CHECK(pairing_error(pairing(pb_transpose(ybar), xdot),
                        pairing(ybar, tp_transpose(xdot))) <= 1e-11);

    const TaylorMatrix hx = rng.taylor(1, 3, 4);
    const TaylorMatrix hy = rng.taylor(1, 3, 4);
    const TaylorMatrix hxdot = rng.taylor(1, 3, 4);
    const TaylorMatrix hydot = rng.taylor(1, 3, 4);
    const TaylorMatrix hzdot = tp_hadamard(hxdot, hy) + tp_hadamard(hx, hydot);
    const TaylorMatrix hzbar = rng.taylor(1, 3, 4);
    auto [hxb, hyb] = pb_hadamard(hzbar, hx, hy);
    CHECK(pairing_error(pairing(hxb, hxdot) + pairing(hyb, hydot),
                        pairing(hzbar, hzdot)) <= 1e-11);

    const TaylorMatrix a = well_conditioned(rng, 1, 4);
    const TaylorMatrix b = rng.taylor(1, 4, 2);
    const TaylorMatrix c = tp_solve(a, b);
    const TaylorMatrix adot = rng.taylor(1, 4, 4);
    const TaylorMatrix bdot = rng.taylor(1, 4, 2);
    const TaylorMatrix cdot = tp_solve(a, bdot - adot * c);
    const TaylorMatrix cbar = rng.taylor(1, 4, 2);
    auto [ab, bb] = pb_solve(cbar, a, c);
    CHECK(pairing_error(pairing(ab, adot) + pairing(bb, bdot), pairing(cbar, cdot)) <=
          1e-11);
  }
}

TEST_CASE("pb_trace degree-1 dot test") {
  Rng rng(55);
  for (int rep = 0; rep < 20; ++rep) {
    const TaylorMatrix xdot = rng.taylor(1, 4, 4);
    const TaylorScalar ybar = rng.taylor(1, 1, 1);
    const TaylorScalar ydot = tp_trace(xdot);
    CHECK(pairing_error(pairing(pb_trace(ybar, 4), xdot), pairing(ybar, ydot)) <= 1e-12);
  }
}

TEST_CASE("pb_qr trivial cases") {
  const TaylorMatrix eye = TaylorMatrix::identity(1, 3);
  const TaylorMatrix zero(1, 3, 3);
  CHECK(max_abs_diff(pb_qr(zero, eye, eye, eye), eye) == 0.0);
  CHECK(max_abs(pb_qr(zero, zero, eye, eye)) == 0.0);
}

TEST_CASE("pb_qr degree-1 dot test on rectangular input") {
  Rng rng(56);
  for (int rep = 0; rep < 20; ++rep) {
    const TaylorMatrix a = full_rank_rect(rng, 1, 5, 3);
    const QrFactors f = qr_pushforward(a, 1);
    const TaylorMatrix adot = rng.taylor(1, 5, 3);
    auto [qdot, rdot] = qr_tangent_d1(a, adot, f);
    const TaylorMatrix qbar = rng.taylor(1, 5, 3);
    const TaylorMatrix rbar = rng.taylor(1, 3, 3);
    const TaylorMatrix abar = pb_qr(qbar, rbar, f.q, f.r);
    CHECK(pairing_error(pairing(qbar, qdot) + pairing(rbar, rdot),
                        pairing(abar, adot)) <= 1e-9);
  }
}

TEST_CASE("pb_qr square fast path agrees with the general formula") {
  Rng rng(57);
  for (int rep = 0; rep < 10; ++rep) {
    const TaylorMatrix a = full_rank_rect(rng, 2, 4, 4);
    const QrFactors f = qr_pushforward(a, 2);
    const TaylorMatrix qbar = rng.taylor(2, 4, 4);
    const TaylorMatrix rbar = rng.taylor(2, 4, 4);
    const TaylorMatrix fast = pb_qr(qbar, rbar, f.q, f.r);
    const TaylorMatrix general = detail::pb_qr_general(qbar, rbar, f.q, f.r);
    CHECK(max_abs_diff(fast, general) <= 1e-12 * std::max(1.0, max_abs(general)));
  }
}

TEST_CASE("pb_qr degree-3 lifted pairing against finite-difference tangents") {
  Rng rng(58);
  for (int rep = 0; rep < 5; ++rep) {
    const TaylorMatrix a = full_rank_rect(rng, 3, 5, 3);
    const QrFactors f = qr_pushforward(a, 3);
    const TaylorMatrix adot = rng.taylor(3, 5, 3);
    const double h = 1e-5;

    const TaylorMatrix qdot = central_difference(
        [](const TaylorMatrix& v) { return qr_pushforward(v, 3).q; }, a, adot, h);
    const TaylorMatrix rdot = central_difference(
        [](const TaylorMatrix& v) { return qr_pushforward(v, 3).r; }, a, adot, h);

    const TaylorMatrix qbar = rng.taylor(3, 5, 3);
    const TaylorMatrix rbar = rng.taylor(3, 3, 3);
    const TaylorMatrix abar = pb_qr(qbar, rbar, f.q, f.r);
    CHECK(max_abs_diff(pairing(qbar, qdot) + pairing(rbar, rdot),
                       pairing(abar, adot)) <= 1e-6);
  }
}

TEST_CASE("pb_eigh trivial and eigenvalue-gradient oracle") {
  TaylorMatrix lam(1, 2, 2);
  lam.at(0, 0, 0) = 1.0;
  lam.at(0, 1, 1) = 2.0;
  const TaylorMatrix eye = TaylorMatrix::identity(1, 2);
  const TaylorMatrix zero(1, 2, 2);
  CHECK(max_abs_diff(pb_eigh(zero, eye, eye, lam), eye) == 0.0);

  // lambar = e1 e1^T picks out grad lambda_1 = q1 q1^T.
  Rng rng(59);
  const TaylorMatrix a = separated_symmetric(rng, 1, 4);
  const EighFactors f = eigh_pushforward(a, 1);
  TaylorMatrix lambar(1, 4, 4);
  lambar.at(0, 0, 0) = 1.0;
  const TaylorMatrix abar = pb_eigh(TaylorMatrix(1, 4, 4), lambar, f.q, f.lam);
  Matrix outer(4, 4);
  const Matrix q0 = f.q.coeff(0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) outer(i, j) = q0(i, 0) * q0(j, 0);
  }
  CHECK(max_abs_diff(abar.coeff(0), outer) <= 1e-13);

  // The same gradient by finite differences of the smallest eigenvalue.
  const Matrix fd = fd_gradient(
      [](const Matrix& m) {
        auto [q, l] = base_eigh(0.5 * (m + transpose(m)));
        return l(0, 0);
      },
      a.coeff(0), 1e-6);
  // fd_gradient perturbs single entries, which breaks symmetry; the
  // symmetric-part gradient is (fd + fd^T)/2 against abar.
  CHECK(max_abs_diff(0.5 * (fd + transpose(fd)), abar.coeff(0)) <= 1e-7);
}

TEST_CASE("pb_eigh degree-1 dot test with symmetric tangents") {
  Rng rng(60);
  for (int rep = 0; rep < 20; ++rep) {
    const TaylorMatrix a = separated_symmetric(rng, 1, 5);
    const EighFactors f = eigh_pushforward(a, 1);
    const TaylorMatrix adot = rng.symmetric_taylor(1, 5);
    auto [qdot, lamdot] = eigh_tangent_d1(a, adot, f);
    const TaylorMatrix qbar = rng.taylor(1, 5, 5);
    const TaylorMatrix lambar = rng.taylor(1, 5, 5);
    const TaylorMatrix abar = pb_eigh(qbar, lambar, f.q, f.lam);
    CHECK(pairing_error(pairing(qbar, qdot) + pairing(lambar, lamdot),
                        pairing(abar, adot)) <= 1e-9);

    // Symmetrizing abar leaves every pairing with a symmetric tangent intact.
    const TaylorMatrix abar_sym = pb_eigh(qbar, lambar, f.q, f.lam, true);
    CHECK(max_abs_diff(pairing(abar, adot), pairing(abar_sym, adot)) <= 1e-12);
  }
}

TEST_CASE("pb_eigh degree-3 lifted pairing against finite-difference tangents") {
  Rng rng(61);
  for (int rep = 0; rep < 5; ++rep) {
    const TaylorMatrix a = separated_symmetric(rng, 3, 4);
    const EighFactors f = eigh_pushforward(a, 3);
    const TaylorMatrix adot = rng.symmetric_taylor(3, 4);
    const double h = 1e-5;

    const TaylorMatrix qdot = central_difference(
        [](const TaylorMatrix& v) { return eigh_pushforward(v, 3).q; }, a, adot, h);
    const TaylorMatrix lamdot = central_difference(
        [](const TaylorMatrix& v) { return eigh_pushforward(v, 3).lam; }, a, adot, h);

    const TaylorMatrix qbar = rng.taylor(3, 4, 4);
    const TaylorMatrix lambar = rng.taylor(3, 4, 4);
    const TaylorMatrix abar = pb_eigh(qbar, lambar, f.q, f.lam);
    CHECK(max_abs_diff(pairing(qbar, qdot) + pairing(lambar, lamdot),
                       pairing(abar, adot)) <= 1e-6);
  }
}

TEST_CASE("pb_eigh rejects degenerate spectra") {
  const TaylorMatrix eye = TaylorMatrix::identity(1, 3);
  CHECK_THROWS_AS(pb_eigh(eye, eye, eye, eye), DegenerateEigenvalues);
}
