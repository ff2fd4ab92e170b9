#ifndef UTPM_OED_HPP
#define UTPM_OED_HPP

#include <cstdint>

#include "utpm/graph.hpp"
#include "utpm/matrix.hpp"

namespace utpm {

/// Configuration of the optimum-experimental-design gradient demo. The
/// objective is the largest eigenvalue of the parameter covariance
/// C = (J^T J)^{-1} with J = y B, computed through QR so J^T J is never
/// formed (forming it would square the condition number):
///
///   Q, R = qr(J);  D = solve(R, I);  C = D D^T;
///   Lam, U = eigh(C);  Phi = largest eigenvalue.
///
/// B is n_m x n_x with entries uniform on [-1, 1) drawn from the seeded
/// stream (B first, then x), so a seed pins the whole instance bit for bit.
struct OedConfig {
  std::size_t n_m = 50;
  std::size_t n_x = 11;
  double y0 = 1.0;
  std::uint64_t seed = 0;
  std::size_t degree = 2;  // ring degree of the gradient runs
  double tol = 1e-12;
};

void validate(const OedConfig& cfg);

/// The recorded straight-line program with handles to the y input and the
/// Phi dependent.
struct OedProgram {
  Graph graph;
  NodeId y;
  NodeId phi;
};

/// Deterministic instance data for a config.
Matrix oed_design_matrix(const OedConfig& cfg);   // B
Matrix oed_design_point(const OedConfig& cfg);    // x (n_x x 1)

OedProgram build_oed_program(const Matrix& b);

/// Phi at y0, evaluated through the QR route at degree 1.
double oed_objective(const OedConfig& cfg);

/// dPhi/dy read from coefficient 1 of [Phi] with [y] = y0 + t.
double oed_gradient_forward(const OedConfig& cfg);

/// dPhi/dy from the reverse sweep over the same recorded program with seed
/// [Phibar] = 1; coefficient 0 of the y adjoint.
double oed_gradient_reverse(const OedConfig& cfg);

/// Closed form Phi(y) = y^{-2} lambda_max((B^T B)^{-1}) evaluated through an
/// independent dense route (form B^T B, invert, eigendecompose).
double oed_objective_dense(const OedConfig& cfg);

/// Closed form gradient -2 y^{-3} lambda_max((B^T B)^{-1}).
double oed_gradient_analytic(const OedConfig& cfg);

}  // namespace utpm

#endif  // UTPM_OED_HPP
