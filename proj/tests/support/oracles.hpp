#pragma once

// Slow, independent reference computations used as test oracles. None of
// these share code with the library under test beyond its public types.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "nestedot/discrete_ot.hpp"
#include "nestedot/linalg.hpp"
#include "nestedot/path_set.hpp"

namespace oracle {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Minimum mean cost over all n! matchings of an n x n cost matrix.
inline double assignment_brute_force(const nestedot::CostMatrix& c) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c(i, perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(n);
}

// Integer masses with equal totals D: split every atom into unit masses and
// match units by brute force. Returns the optimal cost of the normalized
// problem (total mass 1).
inline double unit_expansion_brute_force(const std::vector<std::int64_t>& supply,
                                         const std::vector<std::int64_t>& demand, const nestedot::CostMatrix& c) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < supply.size(); ++i) rows.insert(rows.end(), static_cast<std::size_t>(supply[i]), i);
  for (std::size_t j = 0; j < demand.size(); ++j) cols.insert(cols.end(), static_cast<std::size_t>(demand[j]), j);
  nestedot::CostMatrix expanded(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) expanded(a, b) = c(rows[a], cols[b]);
  return assignment_brute_force(expanded);
}

inline double transport_cost(const nestedot::TransportPlan& plan, const nestedot::CostMatrix& c) {
  double s = 0.0;
  for (const auto& f : plan.flows) s += f.mass * c(f.source, f.target);
  return s;
}

// Maximum absolute violation of the marginal constraints.
inline double marginal_violation(const nestedot::TransportPlan& plan, const std::vector<double>& a,
                                 const std::vector<double>& b) {
  std::vector<double> rs(a.size(), 0.0), cs(b.size(), 0.0);
  for (const auto& f : plan.flows) {
    rs[f.source] += f.mass;
    cs[f.target] += f.mass;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(rs[i] - a[i]));
  for (std::size_t j = 0; j < b.size(); ++j) worst = std::max(worst, std::abs(cs[j] - b[j]));
  for (const auto& f : plan.flows) worst = std::max(worst, -std::min(f.mass, 0.0));
  return worst;
}

// Minimizes c.x subject to A x = b, x >= 0 by enumerating every basic
// solution. Only usable for a handful of variables.
inline double lp_vertex_enumeration(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int k = static_cast<int>(a.cols());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> support;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) support.push_back(j);
    if (support.size() > static_cast<std::size_t>(a.rows())) continue;
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t s = 0; s < support.size(); ++s) sub.col(static_cast<Eigen::Index>(s)) = a.col(support[s]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() != static_cast<Eigen::Index>(support.size())) continue;
    Eigen::VectorXd x = sub.colPivHouseholderQr().solve(b);
    if ((sub * x - b).cwiseAbs().maxCoeff() > 1e-10) continue;
    if (x.minCoeff() < -1e-12) continue;
    double value = 0.0;
    for (std::size_t s = 0; s < support.size(); ++s) value += c[support[s]] * x[static_cast<Eigen::Index>(s)];
    best = std::min(best, value);
  }
  return best;
}

// A scalar two-step path with its probability.
struct Atom2 {
  double x1, x2, weight;
};

// Squared adapted Wasserstein distance between two discrete laws of
// two-step scalar paths, as a linear program over joint laws of the full
// paths with both causality constraints written out explicitly.
inline double bicausal_lp_t2(const std::vector<Atom2>& mu, const std::vector<Atom2>& nu) {
  const std::size_t m = mu.size(), n = nu.size();
  auto var = [n](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * n + j); };
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  const Eigen::Index k = static_cast<Eigen::Index>(m * n);

  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
    for (std::size_t j = 0; j < n; ++j) r[var(i, j)] = 1.0;
    rows.push_back(r);
    rhs.push_back(mu[i].weight);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
    for (std::size_t i = 0; i < m; ++i) r[var(i, j)] = 1.0;
    rows.push_back(r);
    rhs.push_back(nu[j].weight);
  }

  // Given (x1, y1), the law of x2 must equal mu(x2 | x1); symmetrically for y2.
  auto causal = [&](bool on_mu) {
    const auto& own = on_mu ? mu : nu;
    const auto& other = on_mu ? nu : mu;
    std::map<double, double> first_mass;
    for (const auto& a : own) first_mass[a.x1] += a.weight;
    for (const auto& [x1, mass_x1] : first_mass) {
      std::map<double, double> next_mass;
      for (const auto& a : own)
        if (a.x1 == x1) next_mass[a.x2] += a.weight;
      std::map<double, int> other_first;
      for (const auto& b : other) other_first[b.x1] = 1;
      for (const auto& [y1, unused] : other_first) {
        (void)unused;
        for (const auto& [x2, mass_x2] : next_mass) {
          const double cond = mass_x2 / mass_x1;
          Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
          for (std::size_t p = 0; p < own.size(); ++p) {
            if (own[p].x1 != x1) continue;
            for (std::size_t q = 0; q < other.size(); ++q) {
              if (other[q].x1 != y1) continue;
              Eigen::Index v = on_mu ? var(p, q) : var(q, p);
              r[v] += (own[p].x2 == x2 ? 1.0 : 0.0) - cond;
            }
          }
          rows.push_back(r);
          rhs.push_back(0.0);
        }
      }
    }
  };
  causal(true);
  causal(false);

  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), k);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    b[static_cast<Eigen::Index>(r)] = rhs[r];
  }
  Eigen::VectorXd c(k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d1 = mu[i].x1 - nu[j].x1, d2 = mu[i].x2 - nu[j].x2;
      c[var(i, j)] = d1 * d1 + d2 * d2;
    }
  return lp_vertex_enumeration(a, b, c);
}

inline Eigen::MatrixXd to_eigen(const nestedot::Matrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// Classical Gaussian W2^2 from covariances.
inline double gaussian_w2(const Eigen::VectorXd& ma, const Eigen::MatrixXd& a, const Eigen::VectorXd& mb,
                          const Eigen::MatrixXd& b) {
  Eigen::MatrixXd ra = psd_sqrt(a);
  Eigen::MatrixXd inner = psd_sqrt(ra * b * ra);
  return (ma - mb).squaredNorm() + a.trace() + b.trace() - 2.0 * inner.trace();
}

// Adapted Gaussian W2^2 from lower-triangular factors with d x d time blocks.
inline double gaussian_aw2(const Eigen::VectorXd& ma, const Eigen::MatrixXd& l, const Eigen::VectorXd& mb,
                           const Eigen::MatrixXd& m, int dim) {
  Eigen::MatrixXd cross = m.transpose() * l;
  double s = 0.0;
  for (Eigen::Index t = 0; t < l.rows() / dim; ++t) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross.block(t * dim, t * dim, dim, dim));
    s += svd.singularValues().sum();
  }
  return (ma - mb).squaredNorm() + l.squaredNorm() + m.squaredNorm() - 2.0 * s;
}

// Random lower-triangular factor with a strictly positive diagonal.
inline nestedot::Matrix random_factor(Rng& rng, std::size_t n) {
  nestedot::Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) l(i, j) = rng.normal() * 0.7;
    l(i, i) = 0.3 + rng.uniform(0.0, 1.2);
  }
  return l;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

// Sample covariance of the path coordinates (population normalization).
inline Eigen::MatrixXd sample_covariance(const nestedot::PathSet& p) {
  const auto n = static_cast<Eigen::Index>(p.n_samples());
  const auto k = static_cast<Eigen::Index>(p.row_size());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(p.values().data(), n, k);
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(n);
}

}  // namespace oracle
