#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "cpdual/complex_matrix.hpp"
#include "cpdual/errors.hpp"

namespace cpdual {

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, column r pairs with eigenvalues[r]
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Input is symmetrized when the hermiticity defect is within tolerance,
/// rejected otherwise. Off-diagonal norm threshold 1e-14 relative to
/// (1 + ||H||_F), cap of 100 sweeps.
inline HermitianEig eig_hermitian(const ComplexMatrix& h) {
  if (!h.square()) throw InvalidInput("eig_hermitian: matrix not square");
  const std::size_t n = h.rows();
  const double scale = 1.0 + h.frobenius_norm();
  if (hermiticity_defect(h) > 1e-10 * scale) {
    throw InvalidInput("eig_hermitian: input is not Hermitian within tolerance");
  }

  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double off_threshold = 1e-14 * scale;
  const int max_sweeps = 100;

  bool converged = n < 2;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double beta = std::abs(apq);
        if (beta <= 1e-300) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        // Phase of the pivot, then the real-symmetric rotation angle.
        const Complex phase = apq / beta;
        const double alpha = a(p, p).real();
        const double gamma = a(q, q).real();
        const double tau = (gamma - alpha) / (2.0 * beta);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary U acting on coordinates (p,q):
        //   U[p,p] = c, U[p,q] = -s*phase, U[q,p] = s*conj(phase), U[q,q] = c.
        const Complex upq = -s * phase;
        const Complex uqp = s * std::conj(phase);

        // A <- U* A U, applied as column then row updates.
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = arp * c + arq * uqp;
          a(r, q) = arp * upq + arq * c;
        }
        for (std::size_t col = 0; col < n; ++col) {
          const Complex apc = a(p, col);
          const Complex aqc = a(q, col);
          a(p, col) = c * apc + std::conj(uqp) * aqc;
          a(q, col) = std::conj(upq) * apc + c * aqc;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);

        for (std::size_t r = 0; r < n; ++r) {
          const Complex vrp = v(r, p);
          const Complex vrq = v(r, q);
          v(r, p) = vrp * c + vrq * uqp;
          v(r, q) = vrp * upq + vrq * c;
        }
      }
    }
    converged = detail::off_diagonal_norm(a) <= off_threshold;
  }
  if (!converged) {
    throw NumericalFailure("eig_hermitian: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  HermitianEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    out.eigenvalues[r] = a(order[r], order[r]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, r) = v(i, order[r]);
  }
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& h) {
  return eig_hermitian(h).eigenvalues.front();
}

inline double max_eigenvalue(const ComplexMatrix& h) {
  return eig_hermitian(h).eigenvalues.back();
}

/// True iff lambda_min(H) >= -tol. Throws on non-Hermitian input.
inline bool is_psd(const ComplexMatrix& h, double tol) {
  return min_eigenvalue(h) >= -tol;
}

/// Spectral function of a PSD matrix: sum f(lambda_r) v_r v_r*, with
/// eigenvalues below `cutoff` treated as zero (dropped from the sum).
template <class F>
ComplexMatrix psd_spectral_map(const ComplexMatrix& h, F&& f, double cutoff = 0.0) {
  const HermitianEig eig = eig_hermitian(h);
  const std::size_t n = h.rows();
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (eig.eigenvalues[r] <= cutoff) continue;
    const double fr = f(eig.eigenvalues[r]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += fr * eig.eigenvectors(i, r) * std::conj(eig.eigenvectors(j, r));
  }
  return out;
}

/// Inverse square root of a strictly positive definite Hermitian matrix.
inline ComplexMatrix psd_inverse_sqrt(const ComplexMatrix& h, double rank_tol = 1e-12) {
  const double scale = 1.0 + h.frobenius_norm();
  if (min_eigenvalue(h) <= rank_tol * scale) {
    throw InvalidInput("psd_inverse_sqrt: matrix is singular within tolerance");
  }
  return psd_spectral_map(h, [](double x) { return 1.0 / std::sqrt(x); });
}

/// Cholesky factor L with A = L L*, or nullopt when A is not positive
/// definite. Used as the fast feasibility probe inside the barrier solver.
inline std::optional<ComplexMatrix> cholesky(const ComplexMatrix& a) {
  if (!a.square()) throw InvalidInput("cholesky: matrix not square");
  const std::size_t n = a.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

/// Inverse of A from its Cholesky factor (A = L L*).
inline ComplexMatrix cholesky_inverse(const ComplexMatrix& l) {
  const std::size_t n = l.rows();
  ComplexMatrix inv(n, n);
  // Solve A x = e_col by forward then backward substitution.
  std::vector<Complex> y(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = (i == col) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Complex s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * inv(k, col);
      inv(ii, col) = s / l(ii, ii);
    }
  }
  return inv;
}

/// Orthonormal basis of Hermitian n x n matrices under the real inner
/// product Re Tr(A* B): diagonal units first, then symmetric and
/// antisymmetric off-diagonal pairs. Size n^2.
inline std::vector<ComplexMatrix> hermitian_basis(std::size_t n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) basis.push_back(ComplexMatrix::matrix_unit(n, i, i));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ComplexMatrix sym(n, n);
      sym(i, j) = inv_sqrt2;
      sym(j, i) = inv_sqrt2;
      basis.push_back(sym);
      ComplexMatrix anti(n, n);
      anti(i, j) = Complex(0.0, inv_sqrt2);
      anti(j, i) = Complex(0.0, -inv_sqrt2);
      basis.push_back(anti);
    }
  }
  return basis;
}

}  // namespace cpdual
