#pragma once

#include <cstdint>
#include <vector>

#include "cpdual/complex_matrix.hpp"
#include "cpdual/eig.hpp"
#include "cpdual/errors.hpp"
#include "cpdual/rng.hpp"

namespace cpdual {

/// Completely positive map M_m -> M_n stored by its Choi matrix.
///
/// Tensor-factor order of the Choi matrix is input (x) output, i.e. the
/// (mn)x(mn) matrix lives in M_m (x) M_n with row index i*n + a. The map is
/// CP exactly when the Choi matrix is PSD; Hermiticity is the construction
/// invariant, so indefinite Choi matrices (positive-but-not-CP maps such as
/// the transpose) are representable and rejected only by is_cp().
struct CPMap {
  std::size_t m = 0;
  std::size_t n = 0;
  ComplexMatrix choi;

  CPMap() = default;

  CPMap(std::size_t m_in, std::size_t n_out, ComplexMatrix choi_in)
      : m(m_in), n(n_out), choi(std::move(choi_in)) {
    if (m == 0 || n == 0) throw InvalidInput("CPMap: dimensions must be positive");
    if (choi.rows() != m * n || choi.cols() != m * n) {
      throw InvalidInput("CPMap: Choi matrix shape does not match (m*n)x(m*n)");
    }
    const double scale = 1.0 + choi.frobenius_norm();
    if (hermiticity_defect(choi) > 1e-10 * scale) {
      throw InvalidInput("CPMap: Choi matrix is not Hermitian within tolerance");
    }
    choi = hermitian_part(choi);
  }

  bool is_cp() const {
    const double tol = 1e-9 * (1.0 + choi.frobenius_norm());
    return is_psd(choi, tol);
  }
};

/// Kraus form {V_t}: each op is n x m and Phi(x) = sum_t V_t x V_t*.
struct KrausFamily {
  std::vector<ComplexMatrix> ops;
};

/// One C*-convex coefficient a_i (n x n) together with the generator it
/// multiplies. A family is admissible when sum_i a_i* a_i = I_n.
struct CStarTerm {
  ComplexMatrix a;
  std::size_t map_index = 0;
};

struct CStarCoefficients {
  std::vector<CStarTerm> terms;
};

inline void validate_coefficients(const CStarCoefficients& coeffs, std::size_t n,
                                  double tol = 1e-10) {
  if (coeffs.terms.empty()) throw InvalidCoefficients("coefficients: empty family");
  ComplexMatrix sum(n, n);
  for (const auto& term : coeffs.terms) {
    if (term.a.rows() != n || term.a.cols() != n) {
      throw InvalidCoefficients("coefficients: a_i is not n x n");
    }
    sum += term.a.adjoint() * term.a;
  }
  sum -= ComplexMatrix::identity(n);
  if (sum.frobenius_norm() > tol * (1.0 + std::sqrt(static_cast<double>(n)))) {
    throw InvalidCoefficients("coefficients: sum a_i* a_i != I within tolerance");
  }
}

/// Choi matrix from Kraus operators: C = sum_t w_t w_t* with
/// w_t[(i,a)] = V_t[a,i]. PSD by construction.
inline CPMap choi_from_kraus(const KrausFamily& kraus, std::size_t m, std::size_t n) {
  if (kraus.ops.empty()) throw InvalidInput("choi_from_kraus: empty Kraus family");
  ComplexMatrix choi(m * n, m * n);
  for (const auto& v : kraus.ops) {
    if (v.rows() != n || v.cols() != m) {
      throw InvalidInput("choi_from_kraus: Kraus operator is not n x m");
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t a = 0; a < n; ++a) {
        const Complex wi = v(a, i);
        if (wi == Complex{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t b = 0; b < n; ++b)
            choi(i * n + a, j * n + b) += wi * std::conj(v(b, j));
      }
  }
  return CPMap(m, n, std::move(choi));
}

/// Kraus operators from the eigendecomposition of a PSD Choi matrix;
/// eigenvalues below 1e-12 are dropped. Throws NotCompletelyPositive when
/// the Choi matrix has an eigenvalue below -1e-9 * (1 + ||choi||_F).
inline KrausFamily kraus_from_choi(const CPMap& map) {
  const double scale = 1.0 + map.choi.frobenius_norm();
  const HermitianEig eig = eig_hermitian(map.choi);
  if (eig.eigenvalues.front() < -1e-9 * scale) {
    throw NotCompletelyPositive("kraus_from_choi: Choi matrix is not PSD");
  }
  KrausFamily out;
  for (std::size_t r = 0; r < eig.eigenvalues.size(); ++r) {
    const double lam = eig.eigenvalues[r];
    if (lam <= 1e-12) continue;
    const double w = std::sqrt(lam);
    ComplexMatrix v(map.n, map.m);
    for (std::size_t i = 0; i < map.m; ++i)
      for (std::size_t a = 0; a < map.n; ++a) v(a, i) = w * eig.eigenvectors(i * map.n + a, r);
    out.ops.push_back(std::move(v));
  }
  return out;
}

namespace detail {

// Choi-contraction evaluation on a raw Choi matrix; linear in both
// arguments, no Hermiticity assumption. Phi(x)[a,b] = sum_ij x[i,j] C[(i,a),(j,b)].
inline ComplexMatrix apply_choi(const ComplexMatrix& choi, std::size_t m, std::size_t n,
                                const ComplexMatrix& x) {
  if (x.rows() != m || x.cols() != m) throw InvalidInput("apply: input is not m x m");
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Complex xij = x(i, j);
      if (xij == Complex{0.0, 0.0}) continue;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) out(a, b) += xij * choi(i * n + a, j * n + b);
    }
  return out;
}

inline ComplexMatrix ampliate_apply_choi(const ComplexMatrix& choi, std::size_t m, std::size_t n,
                                         std::size_t k, const ComplexMatrix& s) {
  if (s.rows() != k * m || s.cols() != k * m) {
    throw InvalidInput("ampliate_apply: element is not (k*m) x (k*m)");
  }
  ComplexMatrix out(k * n, k * n);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) {
      const ComplexMatrix block = s.block(p * m, q * m, m, m);
      out.set_block(p * n, q * n, apply_choi(choi, m, n, block));
    }
  return out;
}

}  // namespace detail

inline ComplexMatrix apply(const CPMap& map, const ComplexMatrix& x) {
  return detail::apply_choi(map.choi, map.m, map.n, x);
}

/// k-ampliation (id_{M_k} (x) Phi) applied blockwise to a (k*m)x(k*m)
/// element; the k = 1 case reduces to apply.
inline ComplexMatrix ampliate_apply(const CPMap& map, std::size_t k, const ComplexMatrix& s) {
  return detail::ampliate_apply_choi(map.choi, map.m, map.n, k, s);
}

/// C*-convex combination sum_i a_i* Phi_{idx(i)}(.) a_i. The coefficients
/// act on the output factor, so the Choi matrix transforms as
/// sum_i (I_m (x) a_i)* C_idx(i) (I_m (x) a_i).
inline CPMap cstar_combine(const std::vector<CPMap>& maps, const CStarCoefficients& coeffs) {
  if (maps.empty()) throw InvalidInput("cstar_combine: empty map family");
  const std::size_t m = maps.front().m;
  const std::size_t n = maps.front().n;
  for (const auto& map : maps) {
    if (map.m != m || map.n != n) throw InvalidInput("cstar_combine: mixed map dimensions");
  }
  validate_coefficients(coeffs, n);
  const ComplexMatrix im = ComplexMatrix::identity(m);
  ComplexMatrix choi(m * n, m * n);
  for (const auto& term : coeffs.terms) {
    if (term.map_index >= maps.size()) {
      throw InvalidInput("cstar_combine: map index out of range");
    }
    const ComplexMatrix lift = kron(im, term.a);
    choi += lift.adjoint() * maps[term.map_index].choi * lift;
  }
  return CPMap(m, n, std::move(choi));
}

enum class CpOption { none, unital, trace_preserving };

/// Seeded generic CP map with `kraus_rank` Gaussian Kraus operators.
/// The unital option left-multiplies every V_t by (sum V V*)^{-1/2} so that
/// Phi(I) = I; trace-preserving right-multiplies by (sum V* V)^{-1/2}.
inline CPMap random_cp(std::size_t m, std::size_t n, std::size_t kraus_rank, CpOption option,
                       std::uint64_t seed) {
  if (kraus_rank == 0) throw InvalidInput("random_cp: kraus_rank must be >= 1");
  if (option == CpOption::unital && kraus_rank * m < n) {
    throw InvalidInput("random_cp: unital option needs kraus_rank*m >= n");
  }
  if (option == CpOption::trace_preserving && kraus_rank * n < m) {
    throw InvalidInput("random_cp: trace_preserving option needs kraus_rank*n >= m");
  }
  Rng rng(Rng::splitmix64(seed ^ 0xCF1A6D0Bull));
  KrausFamily kraus;
  for (std::size_t t = 0; t < kraus_rank; ++t) kraus.ops.push_back(gaussian_matrix(rng, n, m));
  if (option == CpOption::unital) {
    ComplexMatrix s(n, n);
    for (const auto& v : kraus.ops) s += v * v.adjoint();
    const ComplexMatrix w = psd_inverse_sqrt(s);
    for (auto& v : kraus.ops) v = w * v;
  } else if (option == CpOption::trace_preserving) {
    ComplexMatrix s(m, m);
    for (const auto& v : kraus.ops) s += v.adjoint() * v;
    const ComplexMatrix w = psd_inverse_sqrt(s);
    for (auto& v : kraus.ops) v = v * w;
  }
  return choi_from_kraus(kraus, m, n);
}

inline CPMap identity_map(std::size_t m) {
  ComplexMatrix choi(m * m, m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) choi(i * m + i, j * m + j) = 1.0;
  return CPMap(m, m, std::move(choi));
}

// D(x) = Tr(x) I_n / n, Choi matrix I_{n^2} / n.
inline CPMap depolarizing_map(std::size_t n) {
  ComplexMatrix choi = ComplexMatrix::identity(n * n);
  choi *= 1.0 / static_cast<double>(n);
  return CPMap(n, n, std::move(choi));
}

// x -> x^T. Choi matrix is the SWAP operator: Hermitian but not PSD for
// n >= 2, the standard positive-but-not-CP example.
inline CPMap transpose_map(std::size_t n) {
  ComplexMatrix choi(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) choi(i * n + j, j * n + i) = 1.0;
  return CPMap(n, n, std::move(choi));
}

// Scalar-domain map 1 -> x with x PSD; the Choi matrix is x itself.
inline CPMap map_from_output(const ComplexMatrix& x) {
  return CPMap(1, x.rows(), x);
}

}  // namespace cpdual
