#include "utpm/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "utpm/adjoint.hpp"
#include "utpm/graph.hpp"
#include "utpm/linalg.hpp"
#include "utpm/rng.hpp"
#include "utpm/taylor_matrix.hpp"

namespace utpm {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel_err(double diff, double a, double b) {
  return diff / std::max({1.0, std::abs(a), std::abs(b)});
}

// Well-conditioned square polynomial: identity plus a small random part.
TaylorMatrix conditioned_square(Rng& rng, std::size_t degree, std::size_t n) {
  TaylorMatrix x = tp_smul(0.3, rng.taylor(degree, n, n));
  x.add_to_coeff(0, Matrix::identity(n));
  return x;
}

// Full-column-rank rectangular polynomial (m >= n).
TaylorMatrix conditioned_rect(Rng& rng, std::size_t degree, std::size_t m, std::size_t n) {
  TaylorMatrix x = rng.taylor(degree, m, n);
  Matrix bump(m, n);
  for (std::size_t i = 0; i < n; ++i) bump(i, i) = 3.0;
  x.add_to_coeff(0, bump);
  return x;
}

// Symmetric polynomial with well-separated degree-0 eigenvalues.
TaylorMatrix separated_symmetric(Rng& rng, std::size_t degree, std::size_t n) {
  TaylorMatrix x = rng.symmetric_taylor(degree, n);
  Matrix spread(n, n);
  for (std::size_t i = 0; i < n; ++i) spread(i, i) = 3.0 * static_cast<double>(i + 1);
  x.add_to_coeff(0, spread);
  return x;
}

// Largest per-coefficient residual of the QR defining identities, scaled.
double qr_residual(const TaylorMatrix& a, const QrFactors& f) {
  const double scale = std::max(1.0, max_abs(a));
  const TaylorMatrix prod = tp_mul(f.q, f.r);
  const TaylorMatrix orth = tp_mul(tp_transpose(f.q), f.q);
  const TaylorMatrix eye = TaylorMatrix::identity(a.degree_count(), a.cols());
  double err = std::max(max_abs_diff(prod, a), max_abs_diff(orth, eye));
  if (max_abs(mask_strict_lower(f.r)) != 0.0) {
    err = std::max(err, 1.0);  // structural zero violated; force a failure
  }
  return err / scale;
}

double eigh_residual(const TaylorMatrix& a, const EighFactors& f) {
  const double scale = std::max(1.0, max_abs(a));
  const TaylorMatrix qt = tp_transpose(f.q);
  const TaylorMatrix diag = tp_mul(tp_mul(qt, a), f.q);
  const TaylorMatrix orth = tp_mul(qt, f.q);
  const TaylorMatrix eye = TaylorMatrix::identity(a.degree_count(), a.cols());
  double err = std::max(max_abs_diff(diag, f.lam), max_abs_diff(orth, eye));
  if (max_abs_diff(f.lam, mask_diag(f.lam)) != 0.0) {
    err = std::max(err, 1.0);  // off-diagonal entries must be exactly zero
  }
  return err / scale;
}

// The lifted differentials of the factorizations, used as dot-test tangents:
// ring-arithmetic solutions of the differentiated defining identities.
std::pair<TaylorMatrix, TaylorMatrix> qr_tangent(const TaylorMatrix& adot,
                                                 const QrFactors& f) {
  const TaylorMatrix qt = tp_transpose(f.q);
  const TaylorMatrix r_inv = tp_inv(f.r);
  const TaylorMatrix pl = mask_strict_lower(qt * adot * r_inv);
  const TaylorMatrix x = pl - tp_transpose(pl);
  const TaylorMatrix rdot = qt * adot - x * f.r;
  const TaylorMatrix qdot = (adot - f.q * rdot) * r_inv;
  return {qdot, rdot};
}

std::pair<TaylorMatrix, TaylorMatrix> eigh_tangent(const TaylorMatrix& adot,
                                                   const EighFactors& f) {
  const std::size_t n = f.q.rows();
  const std::size_t degree = f.q.degree_count();
  TaylorMatrix h(degree, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      TaylorScalar gap(degree, 1, 1);
      for (std::size_t d = 0; d < degree; ++d) {
        gap.at(d, 0, 0) = f.lam.at(d, j, j) - f.lam.at(d, i, i);
      }
      const TaylorScalar rec = tp_inv(gap);
      for (std::size_t d = 0; d < degree; ++d) h.at(d, i, j) = rec.at(d, 0, 0);
    }
  }
  const TaylorMatrix qt = tp_transpose(f.q);
  const TaylorMatrix k = qt * adot * f.q;
  const TaylorMatrix lamdot = mask_diag(k);
  const TaylorMatrix qdot = f.q * tp_hadamard(h, k);
  return {qdot, lamdot};
}

TaylorScalar pairing(const TaylorMatrix& bar, const TaylorMatrix& dot) {
  return tp_trace(tp_mul(tp_transpose(bar), dot));
}

// Worst per-coefficient pairing defect, relative to the pairing magnitude.
double pairing_error(const TaylorScalar& lhs, const TaylorScalar& rhs) {
  return max_abs_diff(lhs, rhs) / std::max({1.0, max_abs(lhs), max_abs(rhs)});
}

double dot_test_instance(const std::string& op, std::size_t degree, Rng& rng) {
  if (op == "mul") {
    const TaylorMatrix x = rng.taylor(degree, 3, 4);
    const TaylorMatrix y = rng.taylor(degree, 4, 2);
    const TaylorMatrix xdot = rng.taylor(degree, 3, 4);
    const TaylorMatrix ydot = rng.taylor(degree, 4, 2);
    const TaylorMatrix zdot = xdot * y + x * ydot;
    const TaylorMatrix zbar = rng.taylor(degree, 3, 2);
    auto [xbar, ybar] = pb_mul(zbar, x, y);
    return pairing_error(pairing(xbar, xdot) + pairing(ybar, ydot), pairing(zbar, zdot));
  }
  if (op == "inv") {
    const TaylorMatrix x = conditioned_square(rng, degree, 4);
    const TaylorMatrix y = tp_inv(x);
    const TaylorMatrix xdot = rng.taylor(degree, 4, 4);
    const TaylorMatrix ydot = tp_neg(y * xdot * y);
    const TaylorMatrix ybar = rng.taylor(degree, 4, 4);
    const TaylorMatrix xbar = pb_inv(ybar, y);
    return pairing_error(pairing(xbar, xdot), pairing(ybar, ydot));
  }
  if (op == "solve") {
    const TaylorMatrix a = conditioned_square(rng, degree, 4);
    const TaylorMatrix b = rng.taylor(degree, 4, 3);
    const TaylorMatrix c = tp_solve(a, b);
    const TaylorMatrix adot = rng.taylor(degree, 4, 4);
    const TaylorMatrix bdot = rng.taylor(degree, 4, 3);
    const TaylorMatrix cdot = tp_solve(a, bdot - adot * c);
    const TaylorMatrix cbar = rng.taylor(degree, 4, 3);
    auto [abar, bbar] = pb_solve(cbar, a, c);
    return pairing_error(pairing(abar, adot) + pairing(bbar, bdot), pairing(cbar, cdot));
  }
  if (op == "qr") {
    const TaylorMatrix a = conditioned_rect(rng, degree, 5, 3);
    const QrFactors f = qr_pushforward(a, degree);
    const TaylorMatrix adot = rng.taylor(degree, 5, 3);
    auto [qdot, rdot] = qr_tangent(adot, f);
    const TaylorMatrix qbar = rng.taylor(degree, 5, 3);
    const TaylorMatrix rbar = rng.taylor(degree, 3, 3);
    const TaylorMatrix abar = pb_qr(qbar, rbar, f.q, f.r);
    return pairing_error(pairing(qbar, qdot) + pairing(rbar, rdot), pairing(abar, adot));
  }
  if (op == "eigh") {
    const TaylorMatrix a = separated_symmetric(rng, degree, 5);
    const EighFactors f = eigh_pushforward(a, degree);
    const TaylorMatrix adot = rng.symmetric_taylor(degree, 5);
    auto [qdot, lamdot] = eigh_tangent(adot, f);
    const TaylorMatrix qbar = rng.taylor(degree, 5, 5);
    const TaylorMatrix lambar = rng.taylor(degree, 5, 5);
    const TaylorMatrix abar = pb_eigh(qbar, lambar, f.q, f.lam);
    return pairing_error(pairing(qbar, qdot) + pairing(lambar, lamdot),
                         pairing(abar, adot));
  }
  throw Error("dot-test: unknown operation '" + op + "'");
}

void check_core(RunReport& report, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t instances = 200;

  double assoc = 0.0, distrib = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const TaylorMatrix x = rng.taylor(3, 3, 3);
    const TaylorMatrix y = rng.taylor(3, 3, 3);
    const TaylorMatrix z = rng.taylor(3, 3, 3);
    const double scale = std::max({1.0, max_abs(x), max_abs(y), max_abs(z)});
    assoc = std::max(assoc, max_abs_diff((x * y) * z, x * (y * z)) / (scale * scale * scale));
    distrib = std::max(distrib, max_abs_diff(x * (y + z), x * y + x * z) / (scale * scale));
  }
  report.add({"ring associativity", assoc, 1e-13, assoc <= 1e-13, false, "instances=200"});
  report.add({"ring distributivity", distrib, 1e-13, distrib <= 1e-13, false, "instances=200"});

  double lemma1 = 0.0, lemma2 = 0.0, lemma3 = 0.0, lemma4 = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const TaylorMatrix a = rng.taylor(3, 4, 4);
    lemma1 = std::max(lemma1, max_abs_diff(tp_transpose(mask_strict_lower(a)),
                                           mask_strict_upper(tp_transpose(a))));
    const TaylorMatrix anti = a - tp_transpose(a);
    lemma2 = std::max(lemma2, max_abs_diff(anti, mask_strict_lower(anti) -
                                                     tp_transpose(mask_strict_lower(anti))));
    const TaylorMatrix b = rng.taylor(3, 4, 4);
    const TaylorMatrix c = rng.taylor(3, 4, 4);
    lemma3 = std::max(lemma3,
                      max_abs_diff(tp_trace(tp_transpose(a) * tp_hadamard(b, c)),
                                   tp_trace(tp_transpose(c) * tp_hadamard(b, a))));
    TaylorMatrix diag(3, 4, 4);
    for (std::size_t d = 0; d < 3; ++d) {
      for (std::size_t k = 0; k < 4; ++k) diag.at(d, k, k) = rng.uniform();
    }
    lemma4 = std::max(lemma4, max_abs(mask_diag(diag * anti - anti * diag)));
  }
  report.add({"lemma projector transpose", lemma1, 0.0, lemma1 == 0.0, false, "exact"});
  report.add({"lemma antisymmetric split", lemma2, 0.0, lemma2 == 0.0, false, "exact"});
  report.add({"lemma hadamard trace", lemma3, 1e-13, lemma3 <= 1e-13, false, ""});
  report.add({"lemma diagonal commutator", lemma4, 0.0, lemma4 == 0.0, false, "exact"});

  // Inverse and solve residuals.
  double inv_res = 0.0, solve_res = 0.0;
  bool tri_exact = true;
  for (std::size_t i = 0; i < 25; ++i) {
    const TaylorMatrix x = conditioned_square(rng, 4, 4);
    const TaylorMatrix eye = TaylorMatrix::identity(4, 4);
    inv_res = std::max(inv_res, max_abs_diff(x * tp_inv(x), eye));

    TaylorMatrix tri = mask_strict_upper(rng.taylor(3, 4, 4));
    tri.add_to_coeff(0, 2.0 * Matrix::identity(4));
    for (std::size_t d = 0; d < 3; ++d) {
      for (std::size_t k = 0; k < 4; ++k) tri.at(d, k, k) += rng.uniform();
    }
    const TaylorMatrix b = rng.taylor(3, 4, 2);
    const TaylorMatrix sol = tp_solve(tri, b);
    solve_res = std::max(solve_res, max_abs_diff(tri * sol, b));
    // Upper-triangular system with upper-triangular right-hand side: the
    // solution's strict lower triangle stays exactly zero (no fill-in).
    TaylorMatrix ub = mask_strict_upper(rng.taylor(3, 4, 4));
    ub.add_to_coeff(0, Matrix::identity(4));
    tri_exact = tri_exact && max_abs(mask_strict_lower(tp_solve(tri, ub))) == 0.0;
  }
  report.add({"inverse residual", inv_res, 1e-12, inv_res <= 1e-12, false, "size=4 degree=4"});
  report.add({"solve residual", solve_res, 1e-12, solve_res <= 1e-12, false, "upper-triangular"});
  report.add({"triangular solve no fill-in", tri_exact ? 0.0 : 1.0, 0.0, tri_exact, false,
              "exact"});

  // Serialization round trip.
  const TaylorMatrix sample = rng.taylor(3, 4, 2);
  const bool round_trip = parse_utpm_txt(to_utpm_txt(sample)) == sample;
  report.add({"utpm-txt round trip", round_trip ? 0.0 : 1.0, 0.0, round_trip, false, "exact"});

  // Truncation consistency of the ring operations.
  const TaylorMatrix x = rng.taylor(5, 3, 3);
  const TaylorMatrix y = rng.taylor(5, 3, 3);
  const TaylorMatrix w = conditioned_square(rng, 5, 3);
  const bool trunc = tp_mul(x, y).truncated(3) == tp_mul(x.truncated(3), y.truncated(3)) &&
                     tp_inv(w).truncated(3) == tp_inv(w.truncated(3));
  report.add({"truncation consistency", trunc ? 0.0 : 1.0, 0.0, trunc, false, "exact"});
}

void check_qr(RunReport& report, std::uint64_t seed, const std::vector<std::size_t>& sizes) {
  Rng rng(seed);
  double worst = 0.0;
  std::ostringstream detail;
  auto run_size = [&](std::size_t m, std::size_t n, std::size_t degree) {
    const TaylorMatrix a = conditioned_rect(rng, degree, m, n);
    const double err = qr_residual(a, qr_pushforward(a, degree));
    worst = std::max(worst, err);
    detail << ' ' << m << 'x' << n;
  };
  run_size(100, 5, 4);
  for (std::size_t n : sizes) run_size(n + 2, n, 3);
  report.add({"qr push-forward residual", worst, 1e-11, worst <= 1e-11, false,
              "sizes=" + detail.str()});
}

void check_eigh(RunReport& report, std::uint64_t seed, const std::vector<std::size_t>& sizes) {
  Rng rng(seed);
  double worst = 0.0;
  std::ostringstream detail;
  auto run_size = [&](std::size_t n, std::size_t degree) {
    const TaylorMatrix a = separated_symmetric(rng, degree, n);
    const double err = eigh_residual(a, eigh_pushforward(a, degree));
    worst = std::max(worst, err);
    detail << ' ' << n << 'x' << n;
  };
  run_size(20, 4);
  for (std::size_t n : sizes) run_size(n, 3);
  report.add({"eigh push-forward residual", worst, 1e-10, worst <= 1e-10, false,
              "sizes=" + detail.str()});
}

void check_adjoint(RunReport& report, std::uint64_t seed) {
  for (const char* op : {"mul", "inv", "solve", "qr", "eigh"}) {
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      worst = std::max(worst, dot_test_instance(op, 1, rng));
    }
    report.add({std::string("dot test ") + op, worst, 1e-9, worst <= 1e-9, false,
                "degree=1 instances=50"});
  }
}

void check_graph(RunReport& report, std::uint64_t seed) {
  Rng rng(seed);

  // f(x, y) = tr(x y + x): gradients (y + I)^T and x^T.
  Graph g;
  const NodeId x = g.add_input(3, 3);
  const NodeId y = g.add_input(3, 3);
  const NodeId f = g.trace(g.add(g.mul(x, y), x));
  const Matrix xv = rng.matrix(3, 3);
  const Matrix yv = rng.matrix(3, 3);
  auto grads = g.gradient(f, {{x, TaylorMatrix::constant(xv, 1)},
                              {y, TaylorMatrix::constant(yv, 1)}});
  const double grad_err =
      std::max(max_abs_diff(grads.at(x), transpose(yv + Matrix::identity(3))),
               max_abs_diff(grads.at(y), transpose(xv)));
  report.add({"graph gradient tr(xy + x)", grad_err, 1e-12, grad_err <= 1e-12, false, ""});

  // Composition: one graph for f(g(x)) against g piped into f.
  Graph inner;
  const NodeId gx = inner.add_input(3, 3);
  const NodeId gout = inner.add(inner.mul(gx, gx), gx);
  inner.mark_dependent(gout);
  Graph outer;
  const NodeId fx = outer.add_input(3, 3);
  const NodeId fout = outer.trace(outer.mul(fx, outer.transpose(fx)));
  outer.mark_dependent(fout);
  Graph whole;
  const NodeId wx = whole.add_input(3, 3);
  const NodeId wmid = whole.add(whole.mul(wx, wx), wx);
  const NodeId wout = whole.trace(whole.mul(wmid, whole.transpose(wmid)));
  whole.mark_dependent(wout);

  const TaylorMatrix xt = rng.taylor(3, 3, 3);
  const TaylorMatrix mid = inner.forward({{gx, xt}}).at(gout);
  const TaylorMatrix piped = outer.forward({{fx, mid}}).at(fout);
  const TaylorMatrix direct = whole.forward({{wx, xt}}).at(wout);
  const double comp_err = max_abs_diff(piped, direct) / std::max(1.0, max_abs(direct));
  report.add({"graph composition", comp_err, 1e-13, comp_err <= 1e-13, false, "degree=3"});

  // Linearity of the reverse sweep in the seed.
  whole.forward({{wx, xt}});
  TaylorScalar s1 = rng.taylor(3, 1, 1);
  TaylorScalar s2 = rng.taylor(3, 1, 1);
  const TaylorMatrix r1 = whole.reverse({{wout, s1}}).at(wx);
  const TaylorMatrix r2 = whole.reverse({{wout, s2}}).at(wx);
  const TaylorMatrix r12 =
      whole.reverse({{wout, tp_smul(2.0, s1) + tp_smul(-3.0, s2)}}).at(wx);
  const double lin_err = max_abs_diff(r12, tp_smul(2.0, r1) + tp_smul(-3.0, r2)) /
                         std::max({1.0, max_abs(r1), max_abs(r2)});
  report.add({"reverse sweep linearity", lin_err, 1e-12, lin_err <= 1e-12, false, ""});

  // Determinism: identical runs give bit-identical values and adjoints.
  Graph g2;
  const NodeId dx = g2.add_input(3, 3);
  const NodeId dout = g2.trace(g2.mul(dx, dx));
  g2.mark_dependent(dout);
  const TaylorMatrix din = rng.taylor(2, 3, 3);
  TaylorScalar dseed(2, 1, 1);
  dseed.at(0, 0, 0) = 1.0;
  g2.forward({{dx, din}});
  const TaylorMatrix first = g2.reverse({{dout, dseed}}).at(dx);
  g2.forward({{dx, din}});
  const TaylorMatrix second = g2.reverse({{dout, dseed}}).at(dx);
  report.add({"determinism", first == second ? 0.0 : 1.0, 0.0, first == second, false,
              "bit-identical"});
}

}  // namespace

bool RunReport::all_pass() const {
  for (const CheckRecord& r : records) {
    if (!r.informational && !r.pass) return false;
  }
  return true;
}

CheckRecord& RunReport::add(CheckRecord record) {
  records.push_back(std::move(record));
  return records.back();
}

void print_report(std::ostream& os, const RunReport& report) {
  for (const CheckRecord& r : report.records) {
    if (r.informational) {
      os << "[INFO] " << r.name << ": " << fmt_short(r.error);
      if (!r.detail.empty()) os << " (" << r.detail << ')';
      os << '\n';
    } else {
      os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": err=" << fmt_short(r.error)
         << " tol=" << fmt_short(r.threshold);
      if (!r.detail.empty()) os << " (" << r.detail << ')';
      os << '\n';
    }
  }
  for (const CheckRecord& r : report.records) {
    os << "record command=" << report.command << " name=\"" << r.name << "\" error="
       << fmt(r.error) << " threshold=" << fmt(r.threshold) << " pass=" << (r.pass ? 1 : 0)
       << " informational=" << (r.informational ? 1 : 0);
    if (!r.detail.empty()) os << ' ' << r.detail;
    os << '\n';
  }
  os << (report.all_pass() ? "ALL PASS" : "FAILURES PRESENT") << " elapsed="
     << fmt_short(report.elapsed_seconds) << "s\n";
}

RunReport run_check_suite(const std::string& suite, std::uint64_t seed,
                          const std::vector<std::size_t>& sizes) {
  RunReport report;
  report.command = "check:" + suite;
  const double start = now_seconds();
  bool known = false;
  if (suite == "core" || suite == "all") {
    check_core(report, seed);
    known = true;
  }
  if (suite == "qr" || suite == "all") {
    check_qr(report, seed, sizes);
    known = true;
  }
  if (suite == "eigh" || suite == "all") {
    check_eigh(report, seed, sizes);
    known = true;
  }
  if (suite == "adjoint" || suite == "all") {
    check_adjoint(report, seed);
    known = true;
  }
  if (suite == "graph" || suite == "all") {
    check_graph(report, seed);
    known = true;
  }
  if (!known) {
    throw Error("check: unknown suite '" + suite + "'");
  }
  report.elapsed_seconds = now_seconds() - start;
  return report;
}

RunReport run_dot_test(const std::string& op, std::size_t degree, std::uint64_t seed,
                       std::size_t instances) {
  RunReport report;
  report.command = "dot-test:" + op;
  const double start = now_seconds();
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    worst = std::max(worst, dot_test_instance(op, degree, rng));
  }
  std::ostringstream detail;
  detail << "op=" << op << " degree=" << degree << " instances=" << instances
         << " seed=" << seed;
  report.add({"adjoint-tangent pairing", worst, 1e-9, worst <= 1e-9, false, detail.str()});
  report.elapsed_seconds = now_seconds() - start;
  return report;
}

RunReport run_bench(const std::string& op, std::size_t rows, std::size_t cols,
                    std::size_t degree, std::size_t reps) {
  if (reps < 3) {
    throw Error("bench: need at least 3 repetitions");
  }
  RunReport report;
  report.command = "bench:" + op;
  const double start = now_seconds();
  Rng rng(12345);

  TaylorMatrix a(1, 1, 1);
  double paper_ratio = 0.0;
  if (op == "qr") {
    a = conditioned_rect(rng, degree, rows, cols);
    paper_ratio = 11.79;
  } else if (op == "eigh") {
    if (rows != cols) {
      throw Error("bench: eigh needs a square size");
    }
    a = separated_symmetric(rng, degree, rows);
    paper_ratio = 11.88;
  } else {
    throw Error("bench: unknown operation '" + op + "'");
  }
  const Matrix a0 = a.coeff(0);

  // Medians over repetitions; every repetition times a small batch so the
  // clock resolution does not dominate at these sizes.
  const int batch = 20;
  auto median_time = [&](auto&& body) {
    std::vector<double> times(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const double t0 = now_seconds();
      for (int i = 0; i < batch; ++i) body();
      times[r] = (now_seconds() - t0) / batch;
    }
    std::sort(times.begin(), times.end());
    return times[reps / 2];
  };

  double plain = 0.0, pushed = 0.0;
  if (op == "qr") {
    plain = median_time([&] { (void)base_qr(a0); });
    pushed = median_time([&] { (void)qr_pushforward(a, degree); });
  } else {
    plain = median_time([&] { (void)base_eigh(a0); });
    pushed = median_time([&] { (void)eigh_pushforward(a, degree); });
  }
  const double ratio = pushed / plain;

  std::ostringstream detail;
  detail << "op=" << op << " rows=" << rows << " cols=" << cols << " degree=" << degree
         << " reps=" << reps << " plain_s=" << fmt(plain) << " push_s=" << fmt(pushed)
         << " paper_ratio=" << paper_ratio;
  report.add({"push-forward/plain time ratio", ratio, 0.0, true, true, detail.str()});
  report.elapsed_seconds = now_seconds() - start;
  return report;
}

RunReport run_oed(const OedConfig& cfg, const std::string& mode) {
  RunReport report;
  report.command = "oed-gradient";
  const double start = now_seconds();

  std::ostringstream inputs;
  inputs << "nm=" << cfg.n_m << " nx=" << cfg.n_x << " y0=" << fmt(cfg.y0)
         << " seed=" << cfg.seed << " degree=" << cfg.degree;

  const double analytic = oed_gradient_analytic(cfg);
  const double phi_qr = oed_objective(cfg);
  const double phi_dense = oed_objective_dense(cfg);
  const double route_err = rel_err(std::abs(phi_qr - phi_dense), phi_qr, phi_dense);
  report.add({"objective route equivalence", route_err, 1e-10, route_err <= 1e-10, false,
              inputs.str() + " phi=" + fmt(phi_qr)});

  double forward = 0.0, reverse = 0.0;
  if (mode == "forward" || mode == "both") {
    forward = oed_gradient_forward(cfg);
    const double err = std::abs(forward - analytic);
    report.add({"forward gradient vs analytic", err, cfg.tol, err <= cfg.tol, false,
                inputs.str() + " grad=" + fmt(forward) + " analytic=" + fmt(analytic)});
  }
  if (mode == "reverse" || mode == "both") {
    reverse = oed_gradient_reverse(cfg);
    const double err = std::abs(reverse - analytic);
    report.add({"reverse gradient vs analytic", err, cfg.tol, err <= cfg.tol, false,
                inputs.str() + " grad=" + fmt(reverse) + " analytic=" + fmt(analytic)});
  }
  if (mode == "both") {
    const double err = std::abs(forward - reverse);
    report.add({"forward/reverse agreement", err, 1e-11, err <= 1e-11, false, inputs.str()});
  }
  if (mode != "forward" && mode != "reverse" && mode != "both") {
    throw Error("oed-gradient: unknown mode '" + mode + "'");
  }
  report.elapsed_seconds = now_seconds() - start;
  return report;
}

}  // namespace utpm
