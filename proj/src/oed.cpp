#include "utpm/oed.hpp"

#include "utpm/linalg.hpp"
#include "utpm/rng.hpp"
#include "utpm/taylor_matrix.hpp"

namespace utpm {

void validate(const OedConfig& cfg) {
  if (cfg.n_x < 1 || cfg.n_m < cfg.n_x) {
    throw Error("oed: need n_m >= n_x >= 1");
  }
  if (cfg.y0 == 0.0) {
    throw Error("oed: y0 must be nonzero");
  }
  if (cfg.degree < 2) {
    throw Error("oed: degree must be at least 2");
  }
}

Matrix oed_design_matrix(const OedConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  return rng.matrix(cfg.n_m, cfg.n_x);
}

Matrix oed_design_point(const OedConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  (void)rng.matrix(cfg.n_m, cfg.n_x);  // skip B's draws
  return rng.matrix(cfg.n_x, 1);
}

OedProgram build_oed_program(const Matrix& b) {
  OedProgram p;
  Graph& g = p.graph;
  p.y = g.add_input(1, 1);
  const NodeId b_const = g.add_constant(b);
  const NodeId j = g.smul(p.y, b_const);            // J = y B
  const NodeId r = g.qr(j);                         // Q, R = qr(J); value is R
  const NodeId eye = g.add_constant(Matrix::identity(b.cols()));
  const NodeId d = g.solve(r, eye);                 // D = solve(R, I)
  const NodeId dt = g.transpose(d);
  const NodeId c = g.mul(d, dt);                    // C = D D^T
  const NodeId lam = g.eigh(c);                     // Lam, U = eigh(C); value is Lam
  p.phi = g.get_eigenvalue_entry(lam, b.cols() - 1);  // largest (ascending order)
  g.mark_dependent(p.phi);
  return p;
}

namespace {

TaylorScalar y_curve(const OedConfig& cfg, std::size_t degree) {
  TaylorScalar y(degree, 1, 1);
  y.at(0, 0, 0) = cfg.y0;
  if (degree > 1) y.at(1, 0, 0) = 1.0;  // [y] = y0 + t
  return y;
}

}  // namespace

double oed_objective(const OedConfig& cfg) {
  validate(cfg);
  OedProgram p = build_oed_program(oed_design_matrix(cfg));
  TaylorScalar y(1, 1, 1);
  y.at(0, 0, 0) = cfg.y0;
  auto out = p.graph.forward({{p.y, y}});
  return out.at(p.phi).at(0, 0, 0);
}

double oed_gradient_forward(const OedConfig& cfg) {
  validate(cfg);
  OedProgram p = build_oed_program(oed_design_matrix(cfg));
  auto out = p.graph.forward({{p.y, y_curve(cfg, cfg.degree)}});
  return out.at(p.phi).at(1, 0, 0);
}

double oed_gradient_reverse(const OedConfig& cfg) {
  validate(cfg);
  OedProgram p = build_oed_program(oed_design_matrix(cfg));
  p.graph.forward({{p.y, y_curve(cfg, cfg.degree)}});
  TaylorScalar seed(cfg.degree, 1, 1);
  seed.at(0, 0, 0) = 1.0;
  auto adjoints = p.graph.reverse({{p.phi, seed}});
  return adjoints.at(p.y).at(0, 0, 0);
}

double oed_objective_dense(const OedConfig& cfg) {
  validate(cfg);
  const Matrix b = oed_design_matrix(cfg);
  const Matrix btb = transpose(b) * b;
  const Matrix c = LuDecomposition(btb).solve(Matrix::identity(cfg.n_x));
  // Round-off can leave c very slightly asymmetric; the eigensolver wants
  // a symmetric input.
  const Matrix c_sym = 0.5 * (c + transpose(c));
  auto [q, lam] = base_eigh(c_sym);
  return lam(cfg.n_x - 1, cfg.n_x - 1) / (cfg.y0 * cfg.y0);
}

double oed_gradient_analytic(const OedConfig& cfg) {
  const double lam_max = oed_objective_dense(cfg) * cfg.y0 * cfg.y0;
  return -2.0 * lam_max / (cfg.y0 * cfg.y0 * cfg.y0);
}

}  // namespace utpm
