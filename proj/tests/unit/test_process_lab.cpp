#include <doctest.h>

#include <cmath>

#include "nestedot/error.hpp"
#include "nestedot/process_lab.hpp"
#include "support/oracles.hpp"

using namespace nestedot;

namespace {

double max_cov_gap(const PathSet& p, const GaussianSpec& spec) {
  Eigen::MatrixXd sample = oracle::sample_covariance(p);
  Eigen::MatrixXd exact = oracle::to_eigen(covariance_of(spec));
  return (sample - exact).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("fake BM scaling identity holds per sample") {
  PathSet p = sample(fake_bm_spec(0.1, 0.5), 5000, 3);
  for (std::size_t i = 0; i < p.n_samples(); ++i)
    CHECK(std::abs(p.at(i, 0, 0) - std::sqrt(0.1) * p.at(i, 2, 0)) <= 1e-12);

  ProcessSpec two{FakeBrownianMotion{0.3}, {0.3, 1.0}};
  PathSet q = sample(two, 2000, 4);
  for (std::size_t i = 0; i < q.n_samples(); ++i)
    CHECK(std::abs(q.at(i, 0, 0) - std::sqrt(0.3) * q.at(i, 1, 0)) <= 1e-12);
}

TEST_CASE("zero-volatility OU stays at zero") {
  PathSet p = sample(ou_spec(0.0, 5), 50, 1);
  for (double v : p.values()) CHECK(v == 0.0);
}

TEST_CASE("brownian terminal variance") {
  PathSet p = sample(bm_spec({0.25, 1.0}), 100000, 9);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < p.n_samples(); ++i) {
    s += p.at(i, 1, 0);
    s2 += p.at(i, 1, 0) * p.at(i, 1, 0);
  }
  const double n = static_cast<double>(p.n_samples());
  CHECK(std::abs(s2 / n - (s / n) * (s / n) - 1.0) <= 0.02);
}

TEST_CASE("exact specs") {
  auto bm = exact_gaussian_spec(bm_spec({0.1, 0.5, 1.0}));
  Matrix c = covariance_of(bm);
  Matrix expected{{0.1, 0.1, 0.1}, {0.1, 0.5, 0.5}, {0.1, 0.5, 1.0}};
  CHECK((c - expected).max_abs() <= 1e-15);
  REQUIRE(bm.factor.has_value());
  CHECK((*bm.factor * bm.factor->transpose() - expected).max_abs() <= 1e-15);

  auto ou = exact_gaussian_spec(ou_spec(1.0, 5));
  Matrix oc = covariance_of(ou);
  for (std::size_t k = 0; k < 5; ++k) {
    const double t = static_cast<double>(k + 1) / 5.0;
    CHECK(oc(k, k) == doctest::Approx((1.0 - std::exp(-2.0 * t)) / 2.0).epsilon(1e-14));
  }

  auto fb = exact_gaussian_spec(fake_bm_spec(0.1, 0.5));
  REQUIRE(fb.factor.has_value());
  const Matrix& l = *fb.factor;
  CHECK(l(0, 0) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-15));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(0, 2) == 0.0);
  CHECK(l(2, 0) == 1.0);
  CHECK(l(2, 1) == 0.0);
  CHECK(l(2, 2) == 0.0);
  CHECK(l.is_lower_triangular());
  // X_1 is a standard normal and X_delta its scaled copy
  Matrix fc = covariance_of(fb);
  CHECK(fc(2, 2) == doctest::Approx(1.0));
  CHECK(fc(0, 2) == doctest::Approx(std::sqrt(0.1)));
}

TEST_CASE("Monte Carlo covariance matches the exact spec") {
  const std::vector<ProcessSpec> specs{bm_spec({0.1, 0.5, 1.0}), ou_spec(1.0, 5), fake_bm_spec(0.1, 0.5),
                                       ProcessSpec{FakeBrownianMotion{0.2}, {0.2, 0.4, 0.7, 1.0}},
                                       ProcessSpec{FakeBrownianMotion{0.1}, {0.3, 0.6}}};
  std::uint64_t seed = 100;
  for (const auto& spec : specs) {
    PathSet p = sample(spec, 100000, seed++);
    auto exact = exact_gaussian_spec(spec);
    CHECK(max_cov_gap(p, exact) <= 0.02);
    Eigen::VectorXd means = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                                p.values().data(), static_cast<Eigen::Index>(p.n_samples()),
                                static_cast<Eigen::Index>(p.row_size()))
                                .colwise()
                                .mean();
    CHECK(means.cwiseAbs().maxCoeff() <= 0.02);
  }
}

TEST_CASE("OU lag-one regression coefficient") {
  PathSet p = sample(ou_spec(3.0, 5), 100000, 21);
  for (std::size_t t = 1; t < 5; ++t) {
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < p.n_samples(); ++i) {
      sxy += p.at(i, t - 1, 0) * p.at(i, t, 0);
      sxx += p.at(i, t - 1, 0) * p.at(i, t - 1, 0);
    }
    CHECK(sxy / sxx == doctest::Approx(std::exp(-0.2)).epsilon(0.02));
  }
}

TEST_CASE("sampling is reproducible") {
  CHECK(sample(ou_spec(1.0, 5), 100, 77) == sample(ou_spec(1.0, 5), 100, 77));
  CHECK_FALSE(sample(ou_spec(1.0, 5), 100, 77) == sample(ou_spec(1.0, 5), 100, 78));
  NormalStream a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("invalid specs") {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::EmptyInput;
  };
  CHECK(code([] { bm_spec({0.5, 0.5}).validate(); }) == ErrorCode::InvalidTimes);
  CHECK(code([] { bm_spec({0.0, 0.5}).validate(); }) == ErrorCode::InvalidTimes);
  CHECK(code([] { bm_spec({}).validate(); }) == ErrorCode::InvalidTimes);
  CHECK(code([] { sample(ProcessSpec{FakeBrownianMotion{0.5}, {0.2, 1.0}}, 1, 0); }) == ErrorCode::InvalidTimes);
  CHECK(code([] { sample(ProcessSpec{FakeBrownianMotion{0.1}, {0.5, 1.5}}, 1, 0); }) == ErrorCode::InvalidTimes);
  CHECK(code([] { fake_bm_factor(0.6, 0.5); }) == ErrorCode::InvalidTimes);
  CHECK_THROWS_AS(ou_spec(-1.0, 5).validate(), Error);
}
