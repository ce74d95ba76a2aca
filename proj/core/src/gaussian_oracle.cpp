#include "nestedot/gaussian_oracle.hpp"

#include <cmath>
#include <string>

#include "nestedot/error.hpp"

namespace nestedot {

void GaussianSpec::validate() const {
  const std::size_t n = size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Gaussian spec needs d, T >= 1");
  if (mean.size() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "mean has " + std::to_string(mean.size()) + " entries, expected " + std::to_string(n));
  if (!factor && !covariance) throw Error(ErrorCode::MissingFactor, "Gaussian spec needs a factor or a covariance");
  if (factor) {
    if (factor->rows() != n || factor->cols() != n)
      throw Error(ErrorCode::DimensionMismatch, "factor must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!factor->is_lower_triangular(1e-12 * std::max(1.0, factor->max_abs())))
      throw Error(ErrorCode::InvalidArgument, "factor must be lower triangular");
  }
  if (covariance) {
    if (covariance->rows() != n || covariance->cols() != n)
      throw Error(ErrorCode::DimensionMismatch, "covariance must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!covariance->is_symmetric(1e-10 * std::max(1.0, covariance->max_abs())))
      throw Error(ErrorCode::NotPSD, "covariance is not symmetric");
  }
  if (factor && covariance) {
    Matrix diff = (*factor) * factor->transpose() - *covariance;
    if (diff.frobenius_norm() > 1e-10 * std::max(1.0, covariance->frobenius_norm()))
      throw Error(ErrorCode::InvalidArgument, "factor does not reproduce the covariance");
  }
}

Matrix covariance_of(const GaussianSpec& spec) {
  spec.validate();
  if (spec.covariance) return *spec.covariance;
  return (*spec.factor) * spec.factor->transpose();
}

ResolvedFactor factor_of(const GaussianSpec& spec, DegeneratePolicy policy) {
  spec.validate();
  if (spec.factor) return {*spec.factor, false};
  CholeskyFactor chol = cholesky_psd(*spec.covariance);
  if (chol.ambiguous && policy == DegeneratePolicy::Reject)
    throw Error(ErrorCode::MissingFactor,
                "singular covariance admits several lower-triangular factors; supply one explicitly");
  return {std::move(chol.factor), chol.degenerate};
}

namespace {

double mean_gap(const GaussianSpec& mu, const GaussianSpec& nu) {
  if (mu.dim != nu.dim || mu.steps != nu.steps)
    throw Error(ErrorCode::DimensionMismatch, "Gaussian specs differ in d or T");
  double s = 0.0;
  for (std::size_t k = 0; k < mu.mean.size(); ++k) {
    double d = mu.mean[k] - nu.mean[k];
    s += d * d;
  }
  return s;
}

}  // namespace

double w2_squared_gaussian(const GaussianSpec& mu, const GaussianSpec& nu) {
  Matrix a = covariance_of(mu);
  Matrix b = covariance_of(nu);
  double gap = mean_gap(mu, nu);
  double cross = 0.0;
  if (a.rows() <= kSvdMaxSize) {
    // With A = LL^T and B = MM^T the cross term is the nuclear norm of L^T M.
    // Working from triangular factors avoids square roots of eigenvalues
    // that are zero up to rounding.
    Matrix l = factor_of(mu, DegeneratePolicy::Complete).factor;
    Matrix m = factor_of(nu, DegeneratePolicy::Complete).factor;
    cross = nuclear_norm(l.transpose() * m);
  } else {
    Matrix root_a = sqrt_psd(a);
    sqrt_psd(b);  // NotPSD check on B as well
    auto eig = eigen_symmetric(root_a * b * root_a);
    for (double lambda : eig.values) cross += std::sqrt(std::max(lambda, 0.0));
  }
  return std::max(0.0, gap + a.trace() + b.trace() - 2.0 * cross);
}

double adapted_coupling_scalar(const Matrix& l, const Matrix& m) {
  if (l.rows() != m.rows() || l.cols() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "factor shapes differ");
  // (M^T L)_{tt} = <column t of M, column t of L>
  double s = 0.0;
  for (std::size_t t = 0; t < l.cols(); ++t) {
    double dot = 0.0;
    for (std::size_t k = 0; k < l.rows(); ++k) dot += m(k, t) * l(k, t);
    s += std::abs(dot);
  }
  return s;
}

double adapted_coupling_blocks(const Matrix& l, const Matrix& m, std::size_t dim) {
  if (l.rows() != m.rows() || l.cols() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "factor shapes differ");
  if (dim == 0 || l.cols() % dim != 0) throw Error(ErrorCode::DimensionMismatch, "dimension does not divide dT");
  Matrix cross = m.transpose() * l;
  double s = 0.0;
  for (std::size_t t = 0; t < l.cols() / dim; ++t) s += nuclear_norm(cross.block(t * dim, t * dim, dim, dim));
  return s;
}

AdaptedGaussianValue aw2_squared_gaussian_detailed(const GaussianSpec& mu, const GaussianSpec& nu,
                                                   DegeneratePolicy policy) {
  double gap = mean_gap(mu, nu);
  ResolvedFactor l = factor_of(mu, policy);
  ResolvedFactor m = factor_of(nu, policy);
  double coupling = mu.dim == 1 ? adapted_coupling_scalar(l.factor, m.factor)
                                : adapted_coupling_blocks(l.factor, m.factor, mu.dim);
  double tr_a = 0.0, tr_b = 0.0;
  for (double v : l.factor.data()) tr_a += v * v;
  for (double v : m.factor.data()) tr_b += v * v;
  AdaptedGaussianValue out;
  out.aw2_squared = std::max(0.0, gap + tr_a + tr_b - 2.0 * coupling);
  out.degenerate_mu = l.completed;
  out.degenerate_nu = m.completed;
  return out;
}

double aw2_squared_gaussian(const GaussianSpec& mu, const GaussianSpec& nu, DegeneratePolicy policy) {
  return aw2_squared_gaussian_detailed(mu, nu, policy).aw2_squared;
}

}  // namespace nestedot
