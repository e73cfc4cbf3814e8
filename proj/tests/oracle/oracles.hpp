#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// power-iteration or field code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;
using Dense = std::vector<std::vector<Cx>>;

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted
// descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

// Largest eigenvalue of a Hermitian matrix through its real 2n x 2n
// embedding [[Re, -Im], [Im, Re]], whose spectrum is the Hermitian one doubled.
inline double hermitian_top_eigenvalue(const Dense& h) {
  const std::size_t n = h.size();
  std::vector<std::vector<double>> r(2 * n, std::vector<double>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r[i][j] = h[i][j].real();
      r[i + n][j + n] = h[i][j].real();
      r[i][j + n] = -h[i][j].imag();
      r[i + n][j] = h[i][j].imag();
    }
  }
  return jacobi_eigenvalues(std::move(r)).front();
}

// A^dagger A for a row-major rows x cols matrix.
inline Dense gram_of(const std::vector<Cx>& a, std::size_t rows, std::size_t cols) {
  Dense g(cols, std::vector<Cx>(cols));
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t r = 0; r < rows; ++r) g[i][j] += std::conj(a[r * cols + i]) * a[r * cols + j];
  return g;
}

// sigma1^2 of a row-major matrix via Jacobi on its Gram matrix.
inline double top_singular_sq(const std::vector<Cx>& a, std::size_t rows, std::size_t cols) {
  return hermitian_top_eigenvalue(gram_of(a, rows, cols));
}

// GF(9) = Z_3[t]/(t^2 + 1), element (c0, c1) = c0 + c1 t, written out by hand.
struct Gf9 {
  int c0 = 0;
  int c1 = 0;
};

inline Gf9 gf9_mul(Gf9 a, Gf9 b) {
  // (a0 + a1 t)(b0 + b1 t) with t^2 = -1.
  return {(((a.c0 * b.c0 - a.c1 * b.c1) % 3) + 3) % 3, ((a.c0 * b.c1 + a.c1 * b.c0) % 3 + 3) % 3};
}

inline Gf9 gf9_add(Gf9 a, Gf9 b) { return {(a.c0 + b.c0) % 3, (a.c1 + b.c1) % 3}; }

// a + a^3, which must land in Z_3.
inline int gf9_trace(Gf9 a) {
  const Gf9 cube = gf9_mul(a, gf9_mul(a, a));
  const Gf9 tr = gf9_add(a, cube);
  return tr.c1 == 0 ? tr.c0 : -1;
}

}  // namespace oracle
