#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mubpp {

using Complex = std::complex<double>;

/// Dense complex vector.
class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim) : entries_(dim) {}
  explicit CVector(std::vector<Complex> entries) : entries_(std::move(entries)) {}
  CVector(std::initializer_list<Complex> entries) : entries_(entries) {}

  static CVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const noexcept { return entries_.size(); }
  Complex& operator[](std::size_t i) { return entries_[i]; }
  const Complex& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  double norm() const;
  double norm_sq() const;
  CVector normalized() const;

 private:
  std::vector<Complex> entries_;
};

/// <x|y>, conjugate-linear in x.
Complex inner(const CVector& x, const CVector& y);

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  CVector row(std::size_t r) const;
  CVector col(std::size_t c) const;

  bool operator==(const CMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix dagger(const CMatrix& a);
CMatrix conjugate(const CMatrix& a);
CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CVector apply(const CMatrix& a, const CVector& x);

/// Largest entry modulus.
double max_abs(const CMatrix& a);

struct SingularPair {
  double sigma1 = 0.0;
  CVector right_vec;
};

struct PowerIterationOptions {
  double tol = 1e-12;
  int max_iter = 10'000;
};

/// Largest eigenvalue and eigenvector of a positive semidefinite Hermitian
/// matrix by power iteration from the normalized all-ones vector. Stops once
/// successive Rayleigh quotients differ by less than tol relative.
/// Throws NumericError after max_iter iterations.
std::pair<double, CVector> top_eigen_psd(const CMatrix& h, PowerIterationOptions opts = {});

/// Largest singular value and a unit right singular vector. Power iteration
/// runs on whichever Gram matrix (A A^dagger or A^dagger A) is smaller.
SingularPair top_singular(const CMatrix& a, PowerIterationOptions opts = {});

/// Same as top_singular but always iterates on A^dagger A.
SingularPair top_singular_via_right_gram(const CMatrix& a, PowerIterationOptions opts = {});

/// Schur test: sqrt(max row abs-sum * max column abs-sum) >= sigma1(A).
double schur_singular_bound(const CMatrix& a);

}  // namespace mubpp
