#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <utility>
#include <vector>

#include "cpdual/errors.hpp"

namespace cpdual {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage. The workhorse value type for
/// states, test elements, Choi matrices and SDP data.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InvalidInput("ComplexMatrix: entry count does not match shape");
    }
  }

  // Row-major brace construction for small literals in tests.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidInput("ComplexMatrix: ragged rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // E_ij in M_{n} (square matrix unit).
  static ComplexMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
  }

  static ComplexMatrix diag(const std::vector<double>& entries) {
    ComplexMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
    return out;
  }

  Complex trace() const {
    if (!square()) throw InvalidInput("trace: matrix not square");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
    if (r0 + rows > rows_ || c0 + cols > cols_) throw InvalidInput("block: out of range");
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw InvalidInput("set_block: out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    require_same_shape(rhs, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    require_same_shape(rhs, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex z) {
    for (auto& e : data_) e *= z;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex z, ComplexMatrix a) { return a *= z; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex z) { return a *= z; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidInput("operator*: inner dimensions differ");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  void require_same_shape(const ComplexMatrix& other, const char* where) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      std::ostringstream os;
      os << where << ": shape mismatch (" << rows_ << "x" << cols_ << " vs " << other.rows_ << "x"
         << other.cols_ << ")";
      throw InvalidInput(os.str());
    }
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.square()) throw InvalidInput("hermiticity_defect: matrix not square");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - std::conj(a(j, i)));
  return std::sqrt(s);
}

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
  return hermiticity_defect(a) <= tol;
}

// (A + A*) / 2
inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  if (!a.square()) throw InvalidInput("hermitian_part: matrix not square");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

// Hilbert-Schmidt pairing Tr(A* B). Conjugate-linear in the first slot.
inline Complex inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_shape(b, "inner");
  Complex s = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += std::conj(da[i]) * db[i];
  return s;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

/// Partial trace of a (d1*d2)x(d1*d2) matrix over the given tensor factor
/// (1 = leading factor, 2 = trailing factor). Index convention: row (i,k)
/// with i < d1, k < d2 maps to i*d2 + k.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                                   int which) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2) {
    throw InvalidInput("partial_trace: matrix shape does not match factor dimensions");
  }
  if (which == 1) {
    ComplexMatrix out(d2, d2);
    for (std::size_t k = 0; k < d2; ++k)
      for (std::size_t l = 0; l < d2; ++l) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < d1; ++i) s += m(i * d2 + k, i * d2 + l);
        out(k, l) = s;
      }
    return out;
  }
  if (which == 2) {
    ComplexMatrix out(d1, d1);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d1; ++j) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < d2; ++k) s += m(i * d2 + k, j * d2 + k);
        out(i, j) = s;
      }
    return out;
  }
  throw InvalidInput("partial_trace: factor index must be 1 or 2");
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_shape(b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace cpdual
