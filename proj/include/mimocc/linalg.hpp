#pragma once

// Small dense complex linear algebra: Householder QR, one-sided Jacobi SVD,
// Cholesky solves. Sizes in this project stay below ~16, so everything is
// plain row-major storage with checked dimensions.
//
// Rank tolerance: max(rows, cols) * machine epsilon * largest singular value.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mimocc {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_columns(std::span<const CVector> columns);
  static ComplexMatrix from_rows(std::span<const CVector> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<Complex>& data() const noexcept { return data_; }

  CVector column(std::size_t c) const;
  CVector row(std::size_t r) const;
  void set_column(std::size_t c, const CVector& v);

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  bool all_finite() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend CVector operator*(const ComplexMatrix& a, const CVector& x);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// a^H b
Complex inner(const CVector& a, const CVector& b);
double norm(const CVector& v);
double squared_norm(const CVector& v);
CVector scaled(const CVector& v, Complex s);
CVector axpy(const CVector& y, Complex a, const CVector& x);  // y + a x
CVector normalized(const CVector& v);

// Rotates v so its first significant entry is real and positive.
CVector canonical_phase(const CVector& v);

// Thin SVD: A = U diag(s) V^H with p = min(m, n) columns in U and V,
// singular values sorted descending (stable for ties). Each column pair is
// phase-normalised so the first significant entry of U's column is real
// positive.
struct SvdResult {
  ComplexMatrix u;
  std::vector<double> singular_values;
  ComplexMatrix v;
};
SvdResult svd(const ComplexMatrix& a);

double rank_tolerance(std::size_t rows, std::size_t cols, double largest_singular_value);
std::size_t numerical_rank(const ComplexMatrix& a);

// Full Householder QR: A = Q R with Q unitary m x m, R upper-trapezoidal m x n.
struct QrResult {
  ComplexMatrix q;
  ComplexMatrix r;
};
QrResult householder_qr(const ComplexMatrix& a);

// Orthonormal basis (as columns) of { x : A x = 0 }.
ComplexMatrix null_space(const ComplexMatrix& a);

// Solves A x = b for Hermitian positive-definite A via Cholesky. Throws
// SingularCovariance when a pivot drops below the rank tolerance.
CVector solve_hermitian(const ComplexMatrix& a, const CVector& b);

}  // namespace mimocc
