#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cpdual/cp_map.hpp"
#include "cpdual/complex_matrix.hpp"
#include "cpdual/eig.hpp"
#include "cpdual/errors.hpp"

namespace cpdual {

inline constexpr double kPi = 3.14159265358979323846;

/// Matrix test (k, f, s): level k, a state f on M_k(M_n) represented by its
/// density matrix rho (f(X) = Tr(rho X)), and a test element s in M_k(M_m).
/// rho is (k*n)x(k*n) with the level factor leading, s is (k*m)x(k*m).
struct MatrixTest {
  std::size_t k = 0;
  std::size_t m = 0;  // derived: s.rows() / k
  std::size_t n = 0;  // derived: rho.rows() / k
  ComplexMatrix rho;
  ComplexMatrix s;

  MatrixTest() = default;

  MatrixTest(std::size_t level, ComplexMatrix rho_in, ComplexMatrix s_in)
      : k(level), rho(std::move(rho_in)), s(std::move(s_in)) {
    if (k == 0) throw InvalidInput("MatrixTest: level must be >= 1");
    if (!rho.square() || !s.square()) throw InvalidInput("MatrixTest: rho and s must be square");
    if (rho.rows() % k != 0 || s.rows() % k != 0) {
      throw InvalidInput("MatrixTest: dimensions are not multiples of the level");
    }
    n = rho.rows() / k;
    m = s.rows() / k;
    if (n == 0 || m == 0) throw InvalidInput("MatrixTest: degenerate dimensions");
    const double scale = 1.0 + rho.frobenius_norm();
    if (hermiticity_defect(rho) > 1e-10 * scale) {
      throw InvalidInput("MatrixTest: rho is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10) {
      throw InvalidInput("MatrixTest: rho does not have unit trace");
    }
    if (!is_psd(hermitian_part(rho), 1e-10 * scale)) {
      throw InvalidInput("MatrixTest: rho is not positive semidefinite");
    }
    rho = hermitian_part(rho);
  }
};

/// One test standing in for several: `test` evaluates to a fixed multiple of
/// a prescribed combination of the originals, `scale` being that multiple.
struct FoldResult {
  MatrixTest test;
  double scale = 1.0;
};

/// Evaluation pairing <(k,f,s), Phi> = f(Phi_k(s)) = Tr(rho . Phi_k(s)).
inline Complex pairing(const MatrixTest& t, const CPMap& map) {
  if (t.m != map.m || t.n != map.n) {
    throw InvalidInput("pairing: test and map dimensions do not match");
  }
  const ComplexMatrix y = ampliate_apply(map, t.k, t.s);
  Complex value = 0.0;
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) value += t.rho(i, j) * y(j, i);
  return value;
}

// (k, rho, lambda * s)
inline MatrixTest scale_test(const MatrixTest& t, Complex lambda) {
  return MatrixTest(t.k, t.rho, t.s * lambda);
}

namespace detail {

inline void require_uniform_dims(const std::vector<MatrixTest>& tests, const char* where) {
  if (tests.empty()) throw InvalidInput(std::string(where) + ": empty test list");
  for (const auto& t : tests) {
    if (t.m != tests.front().m || t.n != tests.front().n) {
      throw InvalidInput(std::string(where) + ": tests have mixed (m, n)");
    }
  }
}

}  // namespace detail

/// Fold a finite family into one test at level K = sum k_j with
/// S = diag(s_j) and state (1/N) sum_j embed_j(rho_j). Its pairing is the
/// arithmetic mean of the members' pairings, hence bounded by their max
/// modulus.
inline FoldResult fold_max(const std::vector<MatrixTest>& tests) {
  detail::require_uniform_dims(tests, "fold_max");
  const std::size_t m = tests.front().m;
  const std::size_t n = tests.front().n;
  std::size_t total_k = 0;
  for (const auto& t : tests) total_k += t.k;
  ComplexMatrix s(total_k * m, total_k * m);
  ComplexMatrix rho(total_k * n, total_k * n);
  const double weight = 1.0 / static_cast<double>(tests.size());
  std::size_t offset = 0;
  for (const auto& t : tests) {
    s.set_block(offset * m, offset * m, t.s);
    rho.set_block(offset * n, offset * n, t.rho * weight);
    offset += t.k;
  }
  return FoldResult{MatrixTest(total_k, std::move(rho), std::move(s)), 1.0};
}

/// Fold with complex coefficients c_j = r_j e^{i theta_j}: phases move into
/// the diagonal blocks of S, magnitudes become the convex weights of the
/// state, and scale R = sum r_j satisfies
/// sum_j c_j <t_j, Phi> = R <folded, Phi> for every Phi. Zero coefficients
/// are dropped.
inline FoldResult fold_linear(const std::vector<MatrixTest>& tests,
                              const std::vector<Complex>& coeffs) {
  if (tests.size() != coeffs.size()) {
    throw InvalidInput("fold_linear: coefficient count does not match test count");
  }
  detail::require_uniform_dims(tests, "fold_linear");
  std::vector<std::size_t> kept;
  double total_r = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double r = std::abs(coeffs[j]);
    if (r == 0.0) continue;
    kept.push_back(j);
    total_r += r;
  }
  if (kept.empty()) throw InvalidInput("fold_linear: all coefficients are zero");

  const std::size_t m = tests.front().m;
  const std::size_t n = tests.front().n;
  std::size_t total_k = 0;
  for (std::size_t j : kept) total_k += tests[j].k;
  ComplexMatrix s(total_k * m, total_k * m);
  ComplexMatrix rho(total_k * n, total_k * n);
  std::size_t offset = 0;
  for (std::size_t j : kept) {
    const double r = std::abs(coeffs[j]);
    const Complex phase = coeffs[j] / r;
    s.set_block(offset * m, offset * m, tests[j].s * phase);
    rho.set_block(offset * n, offset * n, tests[j].rho * (r / total_r));
    offset += tests[j].k;
  }
  return FoldResult{MatrixTest(total_k, std::move(rho), std::move(s)), total_r};
}

/// Realified test at angle theta: level 2k, Hermitian test element
/// [[0, e^{-i theta} s], [e^{i theta} s*, 0]] and state (v v*) (x) rho with
/// v = (1,1)/sqrt(2). Its pairing with any Phi equals
/// Re(e^{-i theta} <t, Phi>), a real number.
inline MatrixTest realify(const MatrixTest& t, double theta) {
  const std::size_t km = t.k * t.m;
  const std::size_t kn = t.k * t.n;
  const Complex phase = std::polar(1.0, -theta);
  ComplexMatrix s2(2 * km, 2 * km);
  s2.set_block(0, km, t.s * phase);
  s2.set_block(km, 0, t.s.adjoint() * std::conj(phase));
  ComplexMatrix outer(2, 2);
  outer(0, 0) = outer(0, 1) = outer(1, 0) = outer(1, 1) = 0.5;
  ComplexMatrix rho2 = kron(outer, t.rho);
  (void)kn;
  return MatrixTest(2 * t.k, std::move(rho2), std::move(s2));
}

/// Modulus of the pairing as a sup of realified pairings over a uniform
/// theta grid; grid error is at most |pairing| * (1 - cos(pi / grid_size)).
inline double abs_via_sup(const MatrixTest& t, const CPMap& map, std::size_t grid_size) {
  if (grid_size < 4) throw InvalidInput("abs_via_sup: grid_size must be >= 4");
  double best = 0.0;
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double theta = 2.0 * kPi * static_cast<double>(g) / static_cast<double>(grid_size);
    best = std::max(best, pairing(realify(t, theta), map).real());
  }
  return best;
}

/// Grid sweep followed by golden-section refinement around the best grid
/// point. The realified pairing is |z| cos(theta - arg z), unimodal on the
/// bracketing interval.
inline double abs_via_sup_refined(const MatrixTest& t, const CPMap& map, std::size_t grid_size,
                                  double theta_tol = 1e-9) {
  if (grid_size < 4) throw InvalidInput("abs_via_sup_refined: grid_size must be >= 4");
  const auto value = [&](double theta) { return pairing(realify(t, theta), map).real(); };
  double best = 0.0;
  double best_theta = 0.0;
  const double step = 2.0 * kPi / static_cast<double>(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double theta = step * static_cast<double>(g);
    const double v = value(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  double lo = best_theta - step;
  double hi = best_theta + step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = value(x1);
  double f2 = value(x2);
  while (hi - lo > theta_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value(x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

/// Scalar-target reduction (n = 1): the test collapses to the single element
/// s_rho = sum_ij rho[j,i] s_ij of M_m, and <t, Phi> = Phi(s_rho) for every
/// positive functional Phi.
inline ComplexMatrix scalar_target_reduce(const MatrixTest& t) {
  if (t.n != 1) throw InvalidInput("scalar_target_reduce: requires n == 1");
  ComplexMatrix out(t.m, t.m);
  for (std::size_t i = 0; i < t.k; ++i)
    for (std::size_t j = 0; j < t.k; ++j) {
      const Complex w = t.rho(j, i);
      if (w == Complex{0.0, 0.0}) continue;
      for (std::size_t p = 0; p < t.m; ++p)
        for (std::size_t q = 0; q < t.m; ++q) out(p, q) += w * t.s(i * t.m + p, j * t.m + q);
    }
  return out;
}

/// Scalar-domain pairing (m = 1): for the map 1 -> x the pairing is
/// f(s (x) x) = Tr(rho . kron(s, x)).
inline Complex scalar_domain_pairing(const MatrixTest& t, const ComplexMatrix& x) {
  if (t.m != 1) throw InvalidInput("scalar_domain_pairing: requires m == 1");
  if (x.rows() != t.n || x.cols() != t.n) {
    throw InvalidInput("scalar_domain_pairing: x is not n x n");
  }
  const ComplexMatrix lifted = kron(t.s, x);
  Complex value = 0.0;
  for (std::size_t i = 0; i < lifted.rows(); ++i)
    for (std::size_t j = 0; j < lifted.cols(); ++j) value += t.rho(i, j) * lifted(j, i);
  return value;
}

/// Tracial decomposition of a PSD b in M_k(M_n) with normalized trace 1:
/// b_i = (I_k (x) a_i) b (I_k (x) a_i*) and c_i its normalized trace, so
/// that sum_i c_i = 1 and traces against C*-combinations split convexly.
inline std::vector<std::pair<ComplexMatrix, double>> tracial_decompose(
    const ComplexMatrix& b, const CStarCoefficients& coeffs, std::size_t k, std::size_t n) {
  if (b.rows() != k * n || b.cols() != k * n) {
    throw InvalidInput("tracial_decompose: b is not (k*n) x (k*n)");
  }
  const double dim = static_cast<double>(k * n);
  if (std::abs(b.trace().real() / dim - 1.0) > 1e-9) {
    throw InvalidInput("tracial_decompose: b does not have normalized trace 1");
  }
  validate_coefficients(coeffs, n);
  const ComplexMatrix ik = ComplexMatrix::identity(k);
  std::vector<std::pair<ComplexMatrix, double>> out;
  out.reserve(coeffs.terms.size());
  for (const auto& term : coeffs.terms) {
    const ComplexMatrix lift = kron(ik, term.a);
    ComplexMatrix bi = lift * b * lift.adjoint();
    const double ci = bi.trace().real() / dim;
    out.emplace_back(std::move(bi), ci);
  }
  return out;
}

/// Canonical Choi test at level k = m with s = sum_ij E_ij (x) E_ij: its
/// pairing with Phi is Tr(rho . C_Phi), the Jamiolkowski form of the
/// general pairing.
inline MatrixTest canonical_choi_test(const ComplexMatrix& rho, std::size_t m, std::size_t n) {
  if (rho.rows() != m * n || rho.cols() != m * n) {
    throw InvalidInput("canonical_choi_test: rho is not (m*n) x (m*n)");
  }
  ComplexMatrix s(m * m, m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) s(i * m + i, j * m + j) = 1.0;
  return MatrixTest(m, rho, std::move(s));
}

}  // namespace cpdual
