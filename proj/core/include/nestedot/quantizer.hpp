#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nestedot/path_set.hpp"

namespace nestedot {

// Isotropic cubic lattice with cells [origin + k*delta, origin + (k+1)*delta).
struct GridSpec {
  double delta = 1.0;
  double origin = 0.0;

  void validate() const;
  std::int64_t cell(double x) const noexcept;
  double center(std::int64_t k) const noexcept { return origin + delta * (static_cast<double>(k) + 0.5); }
  double snap(double x) const noexcept { return center(cell(x)); }
};

// Grid width N^{-1/(dT)} for the full-history estimator, N^{-1/(2d)} for the
// Markov estimator.
double default_delta(std::size_t n_samples, std::size_t dim, std::size_t t_steps, bool markov);

// Adapted empirical measure: distinct lattice paths with their sample counts.
// Support paths are sorted lexicographically by lattice index. Atom i has
// probability multiplicity(i) / total().
class QuantizedPathSet {
 public:
  QuantizedPathSet(GridSpec grid, std::size_t t_steps, std::size_t dim,
                   std::vector<std::int64_t> cells, std::vector<std::int64_t> multiplicities);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t t_steps() const noexcept { return t_steps_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t row_size() const noexcept { return t_steps_ * dim_; }
  std::size_t support_size() const noexcept { return multiplicities_.size(); }
  std::int64_t total() const noexcept { return total_; }

  std::span<const std::int64_t> cells(std::size_t i) const noexcept {
    return std::span<const std::int64_t>(cells_).subspan(i * row_size(), row_size());
  }
  std::int64_t multiplicity(std::size_t i) const noexcept { return multiplicities_[i]; }
  std::span<const std::int64_t> multiplicities() const noexcept { return multiplicities_; }
  double weight(std::size_t i) const noexcept {
    return static_cast<double>(multiplicities_[i]) / static_cast<double>(total_);
  }
  std::vector<double> center(std::size_t i) const;

  // Support atoms as a path set, one row per distinct path.
  PathSet support_paths() const;
  // Every sample replaced by its cube center (support repeated by multiplicity).
  PathSet expand() const;

 private:
  GridSpec grid_;
  std::size_t t_steps_;
  std::size_t dim_;
  std::vector<std::int64_t> cells_;
  std::vector<std::int64_t> multiplicities_;
  std::int64_t total_ = 0;
};

QuantizedPathSet quantize(const PathSet& paths, const GridSpec& grid);

}  // namespace nestedot
