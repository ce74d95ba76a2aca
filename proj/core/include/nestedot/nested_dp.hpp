#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nestedot/path_set.hpp"
#include "nestedot/prefix_tree.hpp"

namespace nestedot {

// V_t over all (mu node, nu node) pairs at one depth, dense row-major.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(std::size_t depth, std::size_t rows, std::size_t cols)
      : depth_(depth), rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t depth() const noexcept { return depth_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator()(std::size_t u, std::size_t v) const noexcept { return values_[u * cols_ + v]; }
  double& operator()(std::size_t u, std::size_t v) noexcept { return values_[u * cols_ + v]; }

 private:
  std::size_t depth_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct StageStats {
  std::size_t depth;
  std::size_t node_pairs;
  double wall_ms;
};

struct AwResult {
  double aw2_squared = 0.0;
  std::int64_t n_mu = 0;
  std::int64_t n_nu = 0;
  double delta_mu = 0.0;
  double delta_nu = 0.0;
  TreeMode mode = TreeMode::FullHistory;
  std::vector<StageStats> stage_stats;  // ordered from depth T-1 down to 0
};

struct DpOptions {
  std::size_t threads = 1;
  // Monotone-coupling shortcut on the last stage when d = 1.
  bool sorted_last_stage = true;
};

// Backward recursion V_T = 0,
//   V_t(u, v) = OT between the children of u and v with cost
//               |p_a - q_b|^2 + V_{t+1}(a, b),
// over every pair of depth-t nodes; returns V_0.
AwResult aw2_squared(const PrefixTree& mu_tree, const PrefixTree& nu_tree, const DpOptions& options = {});

inline AwResult aw2_squared(const PrefixTree& mu_tree, const PrefixTree& nu_tree, std::size_t threads) {
  return aw2_squared(mu_tree, nu_tree, DpOptions{threads, true});
}

struct AwConfig {
  std::optional<double> delta_mu;
  std::optional<double> delta_nu;
  double origin = 0.0;
  TreeMode mode = TreeMode::FullHistory;
  std::size_t threads = 1;
};

// quantize -> build_tree -> backward recursion. Unset deltas default to
// default_delta with each side's own sample count.
AwResult compute_aw2(const PathSet& mu, const PathSet& nu, const AwConfig& config);

}  // namespace nestedot
