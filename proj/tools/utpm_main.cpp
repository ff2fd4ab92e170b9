// Command-line front end: the OED gradient demo, the check/dot-test
// batteries and the push-forward overhead benchmark.
//
// Exit codes: 0 all checks pass, 1 any check failed, 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "utpm/checks.hpp"
#include "utpm/oed.hpp"
#include "utpm/taylor_matrix.hpp"

namespace {

int emit(const utpm::RunReport& report) {
  utpm::print_report(std::cout, report);
  return report.all_pass() ? 0 : 1;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    sizes.push_back(static_cast<std::size_t>(std::stoul(item)));
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"univariate Taylor propagation of matrices"};
  app.require_subcommand(1);

  // oed-gradient
  utpm::OedConfig cfg;
  std::string mode = "both";
  std::string write_b;
  CLI::App* oed = app.add_subcommand("oed-gradient",
                                     "experimental-design gradient demo with oracle checks");
  oed->add_option("--nm", cfg.n_m, "rows of the design matrix B");
  oed->add_option("--nx", cfg.n_x, "columns of the design matrix B");
  oed->add_option("--y0", cfg.y0, "evaluation point (nonzero)");
  oed->add_option("--seed", cfg.seed, "random seed for B and x");
  oed->add_option("--degree", cfg.degree, "ring degree of the gradient runs (>= 2)");
  oed->add_option("--tol", cfg.tol, "gradient-vs-analytic tolerance");
  oed->add_option("--mode", mode, "forward|reverse|both")
      ->check(CLI::IsMember({"forward", "reverse", "both"}));
  oed->add_option("--write-b", write_b, "write the design matrix B as UTPM-TXT to this path");

  // check
  std::string suite = "all";
  std::uint64_t check_seed = 0;
  std::string sizes_csv = "3,5,8";
  CLI::App* check = app.add_subcommand("check", "run a named check suite");
  check->add_option("--suite", suite, "core|qr|eigh|adjoint|graph|all")
      ->check(CLI::IsMember({"core", "qr", "eigh", "adjoint", "graph", "all"}));
  check->add_option("--seed", check_seed, "random seed");
  check->add_option("--sizes", sizes_csv, "comma-separated matrix sizes");

  // dot-test
  std::string op;
  std::size_t dt_degree = 1;
  std::uint64_t dt_seed = 0;
  std::size_t dt_instances = 100;
  CLI::App* dot = app.add_subcommand("dot-test", "adjoint-tangent pairing for one operation");
  dot->add_option("--op", op, "mul|inv|solve|qr|eigh")
      ->required()
      ->check(CLI::IsMember({"mul", "inv", "solve", "qr", "eigh"}));
  dot->add_option("--degree", dt_degree, "polynomial degree count");
  dot->add_option("--seed", dt_seed, "random seed");
  dot->add_option("--instances", dt_instances, "number of random instances");

  // bench
  std::string bench_op;
  std::size_t rows = 100, cols = 5, bench_degree = 4, reps = 5;
  CLI::App* bench = app.add_subcommand("bench", "push-forward overhead ratio (informational)");
  bench->add_option("--op", bench_op, "qr|eigh")
      ->required()
      ->check(CLI::IsMember({"qr", "eigh"}));
  bench->add_option("--rows", rows, "matrix rows");
  bench->add_option("--cols", cols, "matrix cols");
  bench->add_option("--degree", bench_degree, "taylor degree count");
  bench->add_option("--reps", reps, "repetitions (>= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help/error text
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (oed->parsed()) {
      if (!write_b.empty()) {
        std::ofstream out(write_b);
        if (!out) {
          std::cerr << "cannot open " << write_b << " for writing\n";
          return 2;
        }
        write_utpm_txt(out, utpm::TaylorMatrix::constant(utpm::oed_design_matrix(cfg), 1));
      }
      return emit(utpm::run_oed(cfg, mode));
    }
    if (check->parsed()) {
      return emit(utpm::run_check_suite(suite, check_seed, parse_sizes(sizes_csv)));
    }
    if (dot->parsed()) {
      return emit(utpm::run_dot_test(op, dt_degree, dt_seed, dt_instances));
    }
    if (bench->parsed()) {
      return emit(utpm::run_bench(bench_op, rows, cols, bench_degree, reps));
    }
  } catch (const utpm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
