#include <cmath>
#include <random>

#include "doctest.h"
#include "mubpp/bounds.hpp"
#include "mubpp/errors.hpp"
#include "mubpp/matrix.hpp"
#include "mubpp/mub.hpp"
#include "oracle/oracles.hpp"

using namespace mubpp;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

double oracle_sigma1(const CMatrix& a) {
  const std::vector<Complex> e(a.entries().begin(), a.entries().end());
  return std::sqrt(oracle::top_singular_sq(e, a.rows(), a.cols()));
}

}  // namespace

TEST_CASE("products, dagger, apply") {
  const CVector x{{1.0, 2.0}, {-3.0, 0.5}, {0.0, -1.0}};
  const CVector y = apply(CMatrix::identity(3), x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(y[i] == x[i]);

  std::mt19937_64 rng(11);
  const CMatrix a = random_matrix(rng, 3, 4);
  CHECK(dagger(dagger(a)) == a);
  CHECK(dagger(a)(2, 1) == std::conj(a(1, 2)));

  const CMatrix b = random_matrix(rng, 4, 2);
  const CMatrix ab = matmul(a, b);
  CHECK(ab.rows() == 3);
  CHECK(ab.cols() == 2);
  Complex s = 0.0;
  for (std::size_t k = 0; k < 4; ++k) s += a(1, k) * b(k, 0);
  CHECK(std::abs(ab(1, 0) - s) < 1e-12);

  CHECK_THROWS_AS(matmul(a, a), UsageError);
  CHECK_THROWS_AS(apply(a, x), UsageError);
  CHECK_THROWS_AS(CMatrix(2, 2, {1.0, 2.0}), UsageError);
  CHECK_THROWS_AS(CMatrix(1, 1, {Complex(std::nan(""), 0.0)}), UsageError);
}

TEST_CASE("generated bases are unitary") {
  for (std::uint32_t n : {2U, 3U, 5U, 9U}) {
    const MubSet set = build_mub_set(n);
    for (const auto& b : set.bases) {
      CHECK(max_abs(matmul(b.matrix, dagger(b.matrix)) - CMatrix::identity(n)) < 1e-12);
    }
  }
}

TEST_CASE("top singular pair on simple matrices") {
  const auto d = top_singular(CMatrix(2, 2, {3.0, 0.0, 0.0, 1.0}));
  CHECK(d.sigma1 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(d.right_vec[0]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(d.right_vec[1]) < 1e-6);

  const auto ones = top_singular(CMatrix(2, 2, {1.0, 1.0, 1.0, 1.0}));
  CHECK(ones.sigma1 == doctest::Approx(2.0).epsilon(1e-12));

  // All-ones start is in the null space here.
  const auto diff = top_singular(CMatrix(1, 2, {1.0, -1.0}));
  CHECK(diff.sigma1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(top_singular(CMatrix(2, 2)), DomainError);
  CHECK_THROWS_AS(top_singular(CMatrix(2, 2, {1.0, 0.0, 0.0, 1.0}), {0.0, 10}), UsageError);
}

TEST_CASE("non-convergence reports the last estimate") {
  // Two nearly tied eigenvalues with 2 iterations cannot converge to 1e-15.
  const CMatrix a(2, 2, {1.0, 0.0, 0.0, 0.999});
  try {
    top_singular(a, {1e-15, 2});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.last_estimate() > 0.9);
  }
}

TEST_CASE("V for N = 3 has sigma1^2 in [1, 3], matching the Jacobi oracle") {
  const MubSet set = build_mub_set(3);
  const VMatrix v = build_v_matrix(0, set, {0, 1, 2, 3});
  const double s = top_singular(v.rows).sigma1;
  CHECK(s * s >= 1.0 - 1e-12);
  CHECK(s * s <= 3.0 + 1e-12);
  CHECK(s == doctest::Approx(oracle_sigma1(v.rows)).epsilon(1e-10));
}

TEST_CASE("Schur bound examples") {
  CHECK(schur_singular_bound(CMatrix::identity(5)) == doctest::Approx(1.0));
  CMatrix ones(4, 4, std::vector<Complex>(16, 1.0));
  CHECK(schur_singular_bound(ones) == doctest::Approx(4.0));
}

TEST_CASE("singular value properties on random matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = dim(rng);
    const std::size_t c = dim(rng);
    CAPTURE(trial);
    const CMatrix a = random_matrix(rng, r, c);
    const CMatrix b = random_matrix(rng, r, c);
    const auto top = top_singular(a);

    CHECK(top.sigma1 <= schur_singular_bound(a) + 1e-9);
    CHECK(top.right_vec.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // Random Gaussian spectra can be nearly degenerate, so compare the
    // value only loosely against the maximizer's gain.
    CHECK(apply(a, top.right_vec).norm() == doctest::Approx(top.sigma1).epsilon(1e-5));
    CHECK(top.sigma1 == doctest::Approx(top_singular(dagger(a)).sigma1).epsilon(1e-9));
    CHECK(top.sigma1 == doctest::Approx(top_singular_via_right_gram(a).sigma1).epsilon(1e-9));
    CHECK(top.sigma1 == doctest::Approx(oracle_sigma1(a)).epsilon(1e-9));
    CHECK(top_singular(a + b).sigma1 <= top.sigma1 + top_singular(b).sigma1 + 1e-9);
  }
}
