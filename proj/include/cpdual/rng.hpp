#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "cpdual/complex_matrix.hpp"
#include "cpdual/eig.hpp"

namespace cpdual {

/// Deterministic random stream. The engine is std::mt19937_64 (fully
/// specified by the standard) and all value transforms are explicit, so a
/// given seed produces the same stream on every platform. Per-trial streams
/// are derived from (seed, trial) so parallel trial order never matters.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x51AFD933ull)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Standard normal via Box-Muller; second value cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Complex gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline ComplexMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.gaussian_complex();
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  return hermitian_part(gaussian_matrix(rng, n, n));
}

// G G* / Tr(G G*): full-rank density matrix almost surely.
inline ComplexMatrix random_density(Rng& rng, std::size_t n) {
  const ComplexMatrix g = gaussian_matrix(rng, n, n);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

inline ComplexMatrix random_psd(Rng& rng, std::size_t n) {
  const ComplexMatrix g = gaussian_matrix(rng, n, n);
  return g * g.adjoint();
}

/// Haar-distributed isometry (rows >= cols) via Gram-Schmidt on a Gaussian
/// matrix with the usual diagonal phase correction.
inline ComplexMatrix random_isometry(Rng& rng, std::size_t rows, std::size_t cols) {
  if (rows < cols) throw InvalidInput("random_isometry: rows < cols");
  ComplexMatrix g = gaussian_matrix(rng, rows, cols);
  ComplexMatrix q(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<Complex> v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = g(i, j);
    // Modified Gram-Schmidt, run twice for orthogonality at machine level.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) proj += std::conj(q(i, k)) * v[i];
        for (std::size_t i = 0; i < rows; ++i) v[i] -= proj * q(i, k);
      }
    }
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    // Phase fix: make the leading nonzero coefficient's diagonal positive.
    Complex pivot = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      pivot += std::conj(g(i, j)) * v[i];
    }
    Complex phase = std::abs(pivot) > 0 ? pivot / std::abs(pivot) : Complex{1.0, 0.0};
    for (std::size_t i = 0; i < rows; ++i) q(i, j) = v[i] / (norm * phase);
  }
  return q;
}

}  // namespace cpdual
