#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace nestedot {

// N sampled paths of T time steps in R^d, stored row-major. Within a row
// the layout is time-major: coordinate j of time t sits at t*d + j
// (0-based), so a prefix x_{1:t} is the leading t*d values of the row.
class PathSet {
 public:
  PathSet(std::size_t n_samples, std::size_t t_steps, std::size_t dim, std::vector<double> values);

  std::size_t n_samples() const noexcept { return n_samples_; }
  std::size_t t_steps() const noexcept { return t_steps_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t row_size() const noexcept { return t_steps_ * dim_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> path(std::size_t i) const noexcept {
    return std::span<const double>(values_).subspan(i * row_size(), row_size());
  }
  // x_{t,j} of sample i; t and j are 0-based.
  double at(std::size_t i, std::size_t t, std::size_t j) const noexcept {
    return values_[i * row_size() + t * dim_ + j];
  }

  friend bool operator==(const PathSet&, const PathSet&) = default;

 private:
  std::size_t n_samples_;
  std::size_t t_steps_;
  std::size_t dim_;
  std::vector<double> values_;
};

// Reads comma-separated rows of t_steps*dim numbers. A single leading header
// line is skipped when its first field is not numeric. Blank lines are ignored.
PathSet load_csv(std::istream& in, std::size_t t_steps, std::size_t dim);
PathSet load_csv_file(const std::filesystem::path& file, std::size_t t_steps, std::size_t dim);

// Writes one row per path using shortest round-trip float formatting.
void save_csv(const PathSet& paths, std::ostream& out);
void save_csv_file(const PathSet& paths, const std::filesystem::path& file);

}  // namespace nestedot
