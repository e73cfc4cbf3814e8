#include "mubpp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mubpp/errors.hpp"

namespace mubpp {

CVector CVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw UsageError("basis index out of range");
  CVector v(dim);
  v[k] = 1.0;
  return v;
}

double CVector::norm_sq() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return s;
}

double CVector::norm() const { return std::sqrt(norm_sq()); }

CVector CVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  CVector out(*this);
  for (auto& z : out.entries_) z /= n;
  return out;
}

Complex inner(const CVector& x, const CVector& y) {
  if (x.dim() != y.dim()) throw UsageError("inner product of vectors with different dimensions");
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) throw UsageError("entry count does not match shape");
  for (const auto& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw UsageError("matrix entries must be finite");
    }
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CVector CMatrix::row(std::size_t r) const {
  if (r >= rows_) throw UsageError("row index out of range");
  return CVector(std::vector<Complex>(entries_.begin() + r * cols_, entries_.begin() + (r + 1) * cols_));
}

CVector CMatrix::col(std::size_t c) const {
  if (c >= cols_) throw UsageError("column index out of range");
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw UsageError("matmul: inner dimensions differ");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CMatrix dagger(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

CMatrix conjugate(const CMatrix& a) {
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = std::conj(a(i, j));
  }
  return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("matrix sum: shapes differ");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  }
  return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("matrix difference: shapes differ");
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

CVector apply(const CMatrix& a, const CVector& x) {
  if (a.cols() != x.dim()) throw UsageError("apply: dimension mismatch");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

namespace {

std::pair<double, CVector> power_iterate(const CMatrix& h, CVector x, PowerIterationOptions opts,
                                         int& iterations) {
  double previous = -1.0;
  double rayleigh = 0.0;
  for (iterations = 1; iterations <= opts.max_iter; ++iterations) {
    CVector y = apply(h, x);
    rayleigh = inner(x, y).real();
    const double ny = y.norm();
    if (ny == 0.0) return {0.0, x};
    for (auto& z : y.entries()) z /= ny;
    x = std::move(y);
    if (previous >= 0.0 && std::abs(rayleigh - previous) < opts.tol * std::max(rayleigh, 1e-300)) {
      // One more quotient on the updated iterate.
      rayleigh = std::max(rayleigh, inner(x, apply(h, x)).real());
      return {rayleigh, x};
    }
    previous = rayleigh;
  }
  throw NumericError("power iteration did not converge in " + std::to_string(opts.max_iter) +
                         " iterations",
                     rayleigh);
}

}  // namespace

std::pair<double, CVector> top_eigen_psd(const CMatrix& h, PowerIterationOptions opts) {
  if (h.rows() != h.cols()) throw UsageError("top_eigen_psd: matrix must be square");
  if (h.rows() == 0) throw UsageError("top_eigen_psd: empty matrix");
  if (!(opts.tol > 0.0)) throw UsageError("top_eigen_psd: tol must be positive");
  const std::size_t n = h.rows();
  int iterations = 0;
  CVector start(std::vector<Complex>(n, 1.0 / std::sqrt(static_cast<double>(n))));
  auto result = power_iterate(h, start, opts, iterations);
  // All-ones can sit in the null space (e.g. A = [1, -1]); retry from unit vectors.
  for (std::size_t k = 0; result.first == 0.0 && k < n; ++k) {
    result = power_iterate(h, CVector::basis(n, k), opts, iterations);
  }
  return result;
}

SingularPair top_singular_via_right_gram(const CMatrix& a, PowerIterationOptions opts) {
  if (max_abs(a) == 0.0) throw DomainError("top_singular: matrix is zero");
  auto [lambda, v] = top_eigen_psd(matmul(dagger(a), a), opts);
  SingularPair out;
  out.sigma1 = std::sqrt(std::max(lambda, 0.0));
  out.right_vec = std::move(v);
  return out;
}

SingularPair top_singular(const CMatrix& a, PowerIterationOptions opts) {
  if (a.rows() >= a.cols()) return top_singular_via_right_gram(a, opts);
  if (max_abs(a) == 0.0) throw DomainError("top_singular: matrix is zero");
  auto [lambda, u] = top_eigen_psd(matmul(a, dagger(a)), opts);
  CVector v = apply(dagger(a), u);
  SingularPair out;
  out.sigma1 = std::sqrt(std::max(lambda, 0.0));
  out.right_vec = v.normalized();
  return out;
}

double schur_singular_bound(const CMatrix& a) {
  double max_row = 0.0;
  std::vector<double> col_sums(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double m = std::abs(a(i, j));
      row_sum += m;
      col_sums[j] += m;
    }
    max_row = std::max(max_row, row_sum);
  }
  const double max_col = col_sums.empty() ? 0.0 : *std::max_element(col_sums.begin(), col_sums.end());
  return std::sqrt(max_row * max_col);
}

}  // namespace mubpp
