#ifndef UTPM_CHECKS_HPP
#define UTPM_CHECKS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "utpm/oed.hpp"

namespace utpm {

/// One named check: an observed error against its bound. Informational
/// records (benchmark ratios) carry no bound and never fail.
struct CheckRecord {
  std::string name;
  double error = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool informational = false;
  std::string detail;  // echoed inputs as key=value tokens
};

/// Outcome of one CLI command: every record plus wall-clock time.
struct RunReport {
  std::string command;
  std::vector<CheckRecord> records;
  double elapsed_seconds = 0.0;

  bool all_pass() const;
  CheckRecord& add(CheckRecord record);
};

/// Human-readable lines followed by one machine-readable key=value record
/// per check.
void print_report(std::ostream& os, const RunReport& report);

/// Named check batteries: core (ring arithmetic, masks, lemmas,
/// serialization), qr / eigh (push-forward residuals over the given sizes),
/// adjoint (degree-1 dot tests for every pullback), graph (recorded-graph
/// gradients, composition, linearity, determinism), all.
RunReport run_check_suite(const std::string& suite, std::uint64_t seed,
                          const std::vector<std::size_t>& sizes);

/// Adjoint-tangent pairing for one operation at the given degree;
/// `instances` independent random instances, worst pairing error reported.
RunReport run_dot_test(const std::string& op, std::size_t degree,
                       std::uint64_t seed, std::size_t instances);

/// Wall-clock ratio TIME(push forward at degree D) / TIME(degree-0
/// factorization); medians over `reps` repetitions. Informational.
RunReport run_bench(const std::string& op, std::size_t rows, std::size_t cols,
                    std::size_t degree, std::size_t reps);

/// The OED gradient demo: AD gradients (per mode: forward, reverse, both)
/// against the closed-form oracle, plus the QR-route/dense-route objective
/// equivalence.
RunReport run_oed(const OedConfig& cfg, const std::string& mode);

}  // namespace utpm

#endif  // UTPM_CHECKS_HPP
