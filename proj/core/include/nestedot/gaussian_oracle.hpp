#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nestedot/linalg.hpp"

namespace nestedot {

// Gaussian law on R^{dT} in the time-major path layout. Either a
// lower-triangular factor, a covariance, or both must be given. For a
// singular covariance the factor is not unique and encodes the filtration,
// so a supplied factor always takes precedence.
struct GaussianSpec {
  std::vector<double> mean;
  std::optional<Matrix> factor;
  std::optional<Matrix> covariance;
  std::size_t dim = 1;
  std::size_t steps = 1;

  std::size_t size() const noexcept { return dim * steps; }
  void validate() const;
};

enum class DegeneratePolicy {
  Complete,  // zero-column completion, reported through the degenerate flag
  Reject,    // MissingFactor when the completion is not unique
};

Matrix covariance_of(const GaussianSpec& spec);

struct ResolvedFactor {
  Matrix factor;
  bool completed = false;  // derived from a singular covariance
};
ResolvedFactor factor_of(const GaussianSpec& spec, DegeneratePolicy policy = DegeneratePolicy::Complete);

// |a - b|^2 + tr(A + B - 2 (A^{1/2} B A^{1/2})^{1/2})
double w2_squared_gaussian(const GaussianSpec& mu, const GaussianSpec& nu);

struct AdaptedGaussianValue {
  double aw2_squared = 0.0;
  bool degenerate_mu = false;
  bool degenerate_nu = false;
};

// |a - b|^2 + tr(LL^T) + tr(MM^T) - 2 sum_t tr|(M^T L)_{t,t}|, where the
// d x d diagonal blocks contribute their singular values (for d = 1, the
// absolute diagonal entries of M^T L).
AdaptedGaussianValue aw2_squared_gaussian_detailed(const GaussianSpec& mu, const GaussianSpec& nu,
                                                   DegeneratePolicy policy = DegeneratePolicy::Complete);
double aw2_squared_gaussian(const GaussianSpec& mu, const GaussianSpec& nu,
                            DegeneratePolicy policy = DegeneratePolicy::Complete);

// Coupling terms of the adapted formula, exposed so the scalar (d = 1) and
// block (d > 1) routes can be compared.
double adapted_coupling_scalar(const Matrix& l, const Matrix& m);
double adapted_coupling_blocks(const Matrix& l, const Matrix& m, std::size_t dim);

}  // namespace nestedot
