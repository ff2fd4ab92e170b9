#ifndef UTPM_RNG_HPP
#define UTPM_RNG_HPP

#include <cstdint>
#include <random>

#include "utpm/matrix.hpp"
#include "utpm/taylor_matrix.hpp"

namespace utpm {

/// Seeded uniform generator on [-1, 1). The mapping from raw mt19937_64
/// output to doubles is spelled out here (top 53 bits scaled) instead of
/// going through std::uniform_real_distribution, whose output is
/// implementation-defined; identical seeds give identical streams on every
/// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [-1, 1).
  double uniform() { return 2.0 * unit() - 1.0; }

  Matrix matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (double& v : m.data()) v = uniform();
    return m;
  }

  Matrix symmetric_matrix(std::size_t n) {
    Matrix m = matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        m(j, i) = m(i, j);
      }
    }
    return m;
  }

  TaylorMatrix taylor(std::size_t degree_count, std::size_t rows, std::size_t cols) {
    TaylorMatrix x(degree_count, rows, cols);
    for (double& v : x.data()) v = uniform();
    return x;
  }

  TaylorMatrix symmetric_taylor(std::size_t degree_count, std::size_t n) {
    TaylorMatrix x(degree_count, n, n);
    for (std::size_t d = 0; d < degree_count; ++d) {
      x.set_coeff(d, symmetric_matrix(n));
    }
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace utpm

#endif  // UTPM_RNG_HPP
