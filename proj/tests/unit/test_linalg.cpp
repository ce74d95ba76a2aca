#include <doctest.h>

#include <cmath>

#include "nestedot/error.hpp"
#include "nestedot/linalg.hpp"
#include "support/oracles.hpp"

using namespace nestedot;

namespace {

Matrix random_matrix(oracle::Rng& rng, std::size_t m, std::size_t n) {
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a;
}

double rel_frobenius(const Matrix& a, const Matrix& b) {
  return (a - b).frobenius_norm() / std::max(1e-300, b.frobenius_norm());
}

}  // namespace

TEST_CASE("basic matrix operations") {
  Matrix a{{1, 2}, {3, 4}};
  Matrix b{{0, 1}, {1, 0}};
  CHECK(a * b == Matrix{{2, 1}, {4, 3}});
  CHECK(a.transpose() == Matrix{{1, 3}, {2, 4}});
  CHECK(a.trace() == 5.0);
  CHECK(a + b == Matrix{{1, 3}, {4, 4}});
  CHECK(2.0 * b == Matrix{{0, 2}, {2, 0}});
  CHECK(a.block(1, 0, 1, 2) == Matrix{{3, 4}});
  CHECK(Matrix::identity(2) * a == a);
  CHECK(Matrix{{1, 0}, {5, 1}}.is_lower_triangular());
  CHECK_FALSE(a.is_lower_triangular());
  CHECK(b.is_symmetric(0.0));
}

TEST_CASE("svd examples") {
  auto id = svd_small(Matrix::identity(3));
  CHECK(id == std::vector<double>{1.0, 1.0, 1.0});
  auto rank_one = svd_small(Matrix{{0, 0}, {std::sqrt(2.0), std::sqrt(2.0)}});
  CHECK(rank_one[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(rank_one[1]) <= 1e-15);
  auto diag = svd_small(Matrix{{3, 0}, {0, -2}});
  CHECK(diag[0] == doctest::Approx(3.0));
  CHECK(diag[1] == doctest::Approx(2.0));
  CHECK_THROWS_AS(svd_small(Matrix(65, 2)), Error);
  CHECK_THROWS_AS(svd_small(Matrix{{std::nan(""), 0}}), Error);
}

TEST_CASE("svd matches Eigen on random and rank-deficient inputs") {
  oracle::Rng rng(3);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.integer(0, 11));
    const std::size_t n = 1 + static_cast<std::size_t>(rng.integer(0, 11));
    Matrix a = random_matrix(rng, m, n);
    if (rep % 3 == 0 && n > 1) {
      // duplicate a column to force a zero singular value
      for (std::size_t i = 0; i < m; ++i) a(i, n - 1) = a(i, 0);
    }
    auto ours = svd_small(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(oracle::to_eigen(a));
    auto ref = svd.singularValues();
    REQUIRE(ours.size() == static_cast<std::size_t>(ref.size()));
    for (std::size_t k = 0; k < ours.size(); ++k) {
      CHECK(ours[k] >= 0.0);
      if (k > 0) CHECK(ours[k] <= ours[k - 1]);
      CHECK(std::abs(ours[k] - ref[static_cast<Eigen::Index>(k)]) <= 1e-10 * std::max(1.0, ref[0]));
    }
    CHECK(nuclear_norm(a) == doctest::Approx(ref.sum()).epsilon(1e-10));
  }
}

TEST_CASE("symmetric eigendecomposition reconstructs") {
  oracle::Rng rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.integer(0, 14));
    Matrix g = random_matrix(rng, n, n);
    Matrix s = g + g.transpose();
    auto eig = eigen_symmetric(s);
    Matrix lambda(n, n);
    for (std::size_t k = 0; k < n; ++k) lambda(k, k) = eig.values[k];
    CHECK(rel_frobenius(eig.vectors * lambda * eig.vectors.transpose(), s) <= 1e-10);
    CHECK(rel_frobenius(eig.vectors.transpose() * eig.vectors, Matrix::identity(n)) <= 1e-10);
    for (std::size_t k = 1; k < n; ++k) CHECK(eig.values[k - 1] <= eig.values[k]);
  }
}

TEST_CASE("psd square root") {
  oracle::Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.integer(0, 9));
    Matrix g = random_matrix(rng, n, n);
    Matrix a = g * g.transpose();
    Matrix r = sqrt_psd(a);
    CHECK(rel_frobenius(r * r, a) <= 1e-10);
    CHECK(r.is_symmetric(1e-12 * std::max(1.0, r.max_abs())));
  }
  CHECK_THROWS_AS(sqrt_psd(Matrix{{1, 0}, {0, -1}}), Error);
  Matrix nearly{{1, 0}, {0, -1e-14}};
  CHECK(sqrt_psd(nearly)(1, 1) == 0.0);
}

TEST_CASE("cholesky examples") {
  CHECK(cholesky_psd(Matrix::identity(3)).factor == Matrix::identity(3));
  CHECK(cholesky_psd(Matrix{{4}}).factor == Matrix{{2}});
  Matrix bm{{0.1, 0.1, 0.1}, {0.1, 0.5, 0.5}, {0.1, 0.5, 1.0}};
  auto c = cholesky_psd(bm);
  Matrix expected{{std::sqrt(0.1), 0, 0}, {std::sqrt(0.1), std::sqrt(0.4), 0}, {std::sqrt(0.1), std::sqrt(0.4), std::sqrt(0.5)}};
  CHECK(rel_frobenius(c.factor, expected) <= 1e-14);
  CHECK(rel_frobenius(c.factor * c.factor.transpose(), bm) <= 1e-10);
  CHECK_FALSE(c.degenerate);
}

TEST_CASE("cholesky reproduces random psd inputs") {
  oracle::Rng rng(9);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.integer(0, 11));
    const std::size_t rank = rep % 4 == 0 ? std::max<std::size_t>(1, n / 2) : n;
    Matrix g = random_matrix(rng, n, rank);
    Matrix a = g * g.transpose();
    auto c = cholesky_psd(a);
    CHECK(c.factor.is_lower_triangular());
    CHECK(rel_frobenius(c.factor * c.factor.transpose(), a) <= 1e-10);
    if (rank < n) CHECK(c.degenerate);
  }
}

TEST_CASE("degenerate cholesky flags") {
  // second coordinate is a copy of the first: zero column at the end, unique
  auto tail = cholesky_psd(Matrix{{1, 1}, {1, 1}});
  CHECK(tail.degenerate);
  CHECK_FALSE(tail.ambiguous);
  // first coordinate degenerate, second not: the completion is one of many
  auto head = cholesky_psd(Matrix{{0, 0}, {0, 2}});
  CHECK(head.degenerate);
  CHECK(head.ambiguous);
  CHECK(rel_frobenius(head.factor * head.factor.transpose(), Matrix{{0, 0}, {0, 2}}) <= 1e-12);
  CHECK_THROWS_AS(cholesky_psd(Matrix{{1, 2}, {2, 1}}), Error);
  CHECK_THROWS_AS(cholesky_psd(Matrix{{1, 0}, {1, 1}}), Error);
}
