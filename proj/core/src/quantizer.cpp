#include "nestedot/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nestedot/error.hpp"

namespace nestedot {

void GridSpec::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorCode::InvalidArgument, "grid delta must be positive and finite");
  if (!std::isfinite(origin)) throw Error(ErrorCode::InvalidArgument, "grid origin must be finite");
}

std::int64_t GridSpec::cell(double x) const noexcept {
  return static_cast<std::int64_t>(std::floor((x - origin) / delta));
}

double default_delta(std::size_t n_samples, std::size_t dim, std::size_t t_steps, bool markov) {
  if (n_samples == 0 || dim == 0 || t_steps == 0)
    throw Error(ErrorCode::InvalidArgument, "default_delta needs positive counts");
  const double n = static_cast<double>(n_samples);
  const double exponent = markov ? 1.0 / (2.0 * static_cast<double>(dim))
                                 : 1.0 / (static_cast<double>(dim) * static_cast<double>(t_steps));
  return std::pow(n, -exponent);
}

QuantizedPathSet::QuantizedPathSet(GridSpec grid, std::size_t t_steps, std::size_t dim,
                                   std::vector<std::int64_t> cells,
                                   std::vector<std::int64_t> multiplicities)
    : grid_(grid),
      t_steps_(t_steps),
      dim_(dim),
      cells_(std::move(cells)),
      multiplicities_(std::move(multiplicities)) {
  grid_.validate();
  if (multiplicities_.empty()) throw Error(ErrorCode::EmptyInput, "empty quantized support");
  if (cells_.size() != multiplicities_.size() * row_size())
    throw Error(ErrorCode::DimensionMismatch, "cell array does not match support size");
  for (auto m : multiplicities_) {
    if (m <= 0) throw Error(ErrorCode::InvalidArgument, "multiplicities must be positive");
    total_ += m;
  }
}

std::vector<double> QuantizedPathSet::center(std::size_t i) const {
  auto k = cells(i);
  std::vector<double> out(k.size());
  std::transform(k.begin(), k.end(), out.begin(), [&](std::int64_t c) { return grid_.center(c); });
  return out;
}

PathSet QuantizedPathSet::support_paths() const {
  std::vector<double> values;
  values.reserve(cells_.size());
  for (auto k : cells_) values.push_back(grid_.center(k));
  return PathSet(support_size(), t_steps_, dim_, std::move(values));
}

PathSet QuantizedPathSet::expand() const {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(total_) * row_size());
  for (std::size_t i = 0; i < support_size(); ++i) {
    auto row = center(i);
    for (std::int64_t r = 0; r < multiplicities_[i]; ++r) values.insert(values.end(), row.begin(), row.end());
  }
  return PathSet(static_cast<std::size_t>(total_), t_steps_, dim_, std::move(values));
}

QuantizedPathSet quantize(const PathSet& paths, const GridSpec& grid) {
  grid.validate();
  const std::size_t n = paths.n_samples();
  const std::size_t w = paths.row_size();

  std::vector<std::int64_t> raw(n * w);
  auto values = paths.values();
  for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = grid.cell(values[k]);

  auto row = [&](std::size_t i) { return std::span<const std::int64_t>(raw).subspan(i * w, w); };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });

  std::vector<std::int64_t> cells;
  std::vector<std::int64_t> mult;
  for (std::size_t pos = 0; pos < n; ++pos) {
    auto r = row(order[pos]);
    if (pos > 0 && std::ranges::equal(r, row(order[pos - 1]))) {
      ++mult.back();
      continue;
    }
    cells.insert(cells.end(), r.begin(), r.end());
    mult.push_back(1);
  }
  return QuantizedPathSet(grid, paths.t_steps(), paths.dim(), std::move(cells), std::move(mult));
}

}  // namespace nestedot
