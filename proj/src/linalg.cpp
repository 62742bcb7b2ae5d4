#include "mimocc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::dimension_mismatch, what);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require(data_.size() == rows * cols, "matrix data size does not match its shape");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const CVector> columns) {
  if (columns.empty()) return {};
  ComplexMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    require(columns[c].size() == m.rows_, "columns of unequal length");
    for (std::size_t r = 0; r < m.rows_; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::span<const CVector> rows) {
  if (rows.empty()) return {};
  ComplexMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == m.cols_, "rows of unequal length");
    for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

CVector ComplexMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

CVector ComplexMatrix::row(std::size_t r) const {
  return CVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void ComplexMatrix::set_column(std::size_t c, const CVector& v) {
  require(v.size() == rows_, "column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols_ == b.rows_, "matrix product dimension mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CVector operator*(const ComplexMatrix& a, const CVector& x) {
  require(a.cols_ == x.size(), "matrix-vector dimension mismatch");
  CVector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * x[k];
    out[i] = s;
  }
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sum dimension mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix difference dimension mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& x : out.data_) x *= s;
  return out;
}

Complex inner(const CVector& a, const CVector& b) {
  require(a.size() == b.size(), "inner product length mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double squared_norm(const CVector& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

double norm(const CVector& v) { return std::sqrt(squared_norm(v)); }

CVector scaled(const CVector& v, Complex s) {
  CVector out = v;
  for (auto& x : out) x *= s;
  return out;
}

CVector axpy(const CVector& y, Complex a, const CVector& x) {
  require(x.size() == y.size(), "axpy length mismatch");
  CVector out = y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
  return out;
}

CVector normalized(const CVector& v) {
  const double n = norm(v);
  if (n == 0.0) return v;
  return scaled(v, 1.0 / n);
}

namespace {

std::size_t first_significant(const CVector& v) {
  double peak = 0.0;
  for (const auto& x : v) peak = std::max(peak, std::abs(x));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-10 * peak) return i;
  }
  return 0;
}

void normalize_phases(ComplexMatrix& u, ComplexMatrix& v) {
  for (std::size_t j = 0; j < u.cols(); ++j) {
    const CVector col = u.column(j);
    const Complex lead = col[first_significant(col)];
    if (std::abs(lead) == 0.0) continue;
    const Complex rot = std::conj(lead) / std::abs(lead);
    for (std::size_t i = 0; i < u.rows(); ++i) u(i, j) *= rot;
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) *= rot;
  }
}

// One-sided Jacobi for m >= n.
SvdResult jacobi_svd_tall(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<CVector> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = a.column(j);
  std::vector<CVector> vcols(n, CVector(n));
  for (std::size_t j = 0; j < n; ++j) vcols[j][j] = 1.0;

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = squared_norm(w[p]);
        const double beta = squared_norm(w[q]);
        const Complex gamma = inner(w[p], w[q]);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = gamma / g;  // e^{i phi}
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex back = std::conj(phase);  // e^{-i phi}
        for (std::size_t i = 0; i < m; ++i) {
          const Complex xp = w[p][i];
          const Complex xq = back * w[q][i];
          w[p][i] = c * xp - s * xq;
          w[q][i] = s * xp + c * xq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex xp = vcols[p][i];
          const Complex xq = back * vcols[q][i];
          vcols[p][i] = c * xp - s * xq;
          vcols[q][i] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(w[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out;
  out.u = ComplexMatrix(m, n);
  out.v = ComplexMatrix(n, n);
  out.singular_values.resize(n);
  const double largest = n > 0 ? sigma[order[0]] : 0.0;
  const double tiny = rank_tolerance(m, n, largest);
  std::vector<CVector> ucols;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.singular_values[j] = sigma[src];
    out.v.set_column(j, vcols[src]);
    if (sigma[src] > tiny && sigma[src] > 0.0) {
      ucols.push_back(scaled(w[src], 1.0 / sigma[src]));
    } else {
      ucols.emplace_back();  // completed below
    }
  }
  // Complete U for (numerically) zero singular values with an orthonormal
  // extension built from canonical basis vectors.
  std::size_t candidate = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!ucols[j].empty()) continue;
    while (candidate < m) {
      CVector e(m);
      e[candidate++] = 1.0;
      for (const auto& other : ucols) {
        if (!other.empty()) e = axpy(e, -inner(other, e), other);
      }
      for (const auto& other : ucols) {
        if (!other.empty()) e = axpy(e, -inner(other, e), other);
      }
      if (norm(e) > 1e-8) {
        ucols[j] = normalized(e);
        break;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) out.u.set_column(j, ucols[j]);
  return out;
}

}  // namespace

CVector canonical_phase(const CVector& v) {
  if (v.empty()) return v;
  const Complex lead = v[first_significant(v)];
  if (std::abs(lead) == 0.0) return v;
  return scaled(v, std::conj(lead) / std::abs(lead));
}

SvdResult svd(const ComplexMatrix& a) {
  require(a.all_finite(), "svd of a matrix with non-finite entries");
  SvdResult out;
  if (a.rows() >= a.cols()) {
    out = jacobi_svd_tall(a);
  } else {
    SvdResult t = jacobi_svd_tall(a.adjoint());
    out.u = std::move(t.v);
    out.v = std::move(t.u);
    out.singular_values = std::move(t.singular_values);
  }
  normalize_phases(out.u, out.v);
  return out;
}

double rank_tolerance(std::size_t rows, std::size_t cols, double largest_singular_value) {
  return static_cast<double>(std::max(rows, cols)) * kEps * largest_singular_value;
}

std::size_t numerical_rank(const ComplexMatrix& a) {
  if (a.empty()) return 0;
  const auto s = svd(a).singular_values;
  const double tol = rank_tolerance(a.rows(), a.cols(), s.front());
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double x) { return x > tol && x > 0.0; }));
}

QrResult householder_qr(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  QrResult out{ComplexMatrix::identity(m), a};
  auto& q = out.q;
  auto& r = out.r;
  const std::size_t steps = std::min(m > 0 ? m - 1 : 0, n);
  for (std::size_t k = 0; k < steps; ++k) {
    CVector x(m - k);
    for (std::size_t i = k; i < m; ++i) x[i - k] = r(i, k);
    const double xnorm = norm(x);
    if (xnorm == 0.0) continue;
    const Complex phase = std::abs(x[0]) > 0.0 ? x[0] / std::abs(x[0]) : Complex(1.0);
    const Complex alpha = -phase * xnorm;
    CVector v = x;
    v[0] -= alpha;
    const double vnorm = norm(v);
    if (vnorm == 0.0) continue;
    for (auto& e : v) e /= vnorm;
    for (std::size_t j = k; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += std::conj(v[i - k]) * r(i, j);
      for (std::size_t i = k; i < m; ++i) r(i, j) -= 2.0 * v[i - k] * s;
    }
    for (std::size_t i = 0; i < m; ++i) {
      Complex s = 0.0;
      for (std::size_t l = k; l < m; ++l) s += q(i, l) * v[l - k];
      for (std::size_t l = k; l < m; ++l) q(i, l) -= 2.0 * s * std::conj(v[l - k]);
    }
  }
  return out;
}

ComplexMatrix null_space(const ComplexMatrix& a) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return ComplexMatrix::identity(n);
  const SvdResult s = svd(a);
  const double tol = rank_tolerance(a.rows(), a.cols(), s.singular_values.front());
  std::size_t rank = 0;
  for (double x : s.singular_values) rank += (x > tol && x > 0.0) ? 1 : 0;
  if (rank == 0) return ComplexMatrix::identity(n);
  if (rank >= n) return ComplexMatrix(n, 0);
  std::vector<CVector> range;
  for (std::size_t j = 0; j < rank; ++j) range.push_back(s.v.column(j));
  const QrResult qr = householder_qr(ComplexMatrix::from_columns(range));
  ComplexMatrix basis(n, n - rank);
  for (std::size_t j = rank; j < n; ++j) basis.set_column(j - rank, qr.q.column(j));
  return basis;
}

CVector solve_hermitian(const ComplexMatrix& a, const CVector& b) {
  const std::size_t n = a.rows();
  require(a.cols() == n && b.size() == n, "solve_hermitian dimension mismatch");
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(a(i, i)));
  const double tol = static_cast<double>(n) * kEps * peak;
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > tol) || peak == 0.0) {
      throw Error(ErrorCode::singular_covariance,
                  "matrix is not numerically positive definite (pivot " + std::to_string(d) + ")");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  CVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  CVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

}  // namespace mimocc
