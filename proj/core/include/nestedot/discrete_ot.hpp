#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "nestedot/path_set.hpp"
#include "nestedot/quantizer.hpp"

namespace nestedot {

// Dense m x n matrix of finite nonnegative transport costs, row-major.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols);
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> costs);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return costs_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return costs_[i * cols_ + j]; }
  std::span<const double> data() const noexcept { return costs_; }

  void resize(std::size_t rows, std::size_t cols);
  // Throws InvalidArgument on negative or non-finite entries.
  void validate() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> costs_;
};

struct Flow {
  std::size_t source;
  std::size_t target;
  double mass;
};

struct TransportPlan {
  std::vector<Flow> flows;
  double objective = 0.0;
};

// Reusable exact transportation solver (primal network simplex over a
// strongly feasible spanning tree). Holding one per thread avoids
// reallocating the workspace for every small problem. Not thread-safe.
class ExactSolver {
 public:
  ExactSolver();
  ~ExactSolver();
  ExactSolver(ExactSolver&&) noexcept;
  ExactSolver& operator=(ExactSolver&&) noexcept;

  // Integer masses: supply[i] and demand[j] must be positive with equal
  // totals D. Returns the optimal cost of moving mass/D, i.e. the OT value
  // between the normalized weight vectors. Optionally fills `plan` with
  // normalized flows.
  double solve(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
               const CostMatrix& costs, TransportPlan* plan = nullptr);

  // Probability vectors (each summing to 1 within 1e-12).
  double solve(std::span<const double> source_weights, std::span<const double> target_weights,
               const CostMatrix& costs, TransportPlan* plan = nullptr);

  std::size_t last_pivots() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

TransportPlan solve_exact(std::span<const double> source_weights, std::span<const double> target_weights,
                          const CostMatrix& costs);

// Rational weights supply[i]/D and demand[j]/D with a shared total D.
TransportPlan solve_exact(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                          const CostMatrix& costs);

struct WeightedPoint {
  double x;
  double weight;
};

// Monotone coupling of two sorted 1-d measures under squared distance.
TransportPlan solve_sorted_1d(std::span<const WeightedPoint> source, std::span<const WeightedPoint> target);

// Same with integer masses (common total), value only.
double sorted_1d_value(std::span<const double> source_x, std::span<const std::int64_t> source_mass,
                       std::span<const double> target_x, std::span<const std::int64_t> target_mass);

inline constexpr std::size_t kDefaultW2SizeCap = 4096;

// Exact W2^2 between the uniform empirical measures of two path sets under
// the cost sum_t |x_t - y_t|^2.
double w2_squared_empirical(const PathSet& mu, const PathSet& nu, std::size_t size_cap = kDefaultW2SizeCap);

// Exact W2^2 between two adapted empirical measures (weighted cube centers).
double w2_squared_quantized(const QuantizedPathSet& mu, const QuantizedPathSet& nu,
                            std::size_t size_cap = kDefaultW2SizeCap);

}  // namespace nestedot
