#include "nestedot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nestedot/error.hpp"

namespace nestedot {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw Error(ErrorCode::DimensionMismatch, "matrix data size mismatch");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const {
  if (row + rows > rows_ || col + cols > cols_) throw Error(ErrorCode::DimensionMismatch, "block out of range");
  Matrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(row + i, col + j);
  return b;
}

double Matrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double s = 0.0;
  for (double v : data_) s = std::max(s, std::abs(v));
  return s;
}

bool Matrix::is_lower_triangular(double tol) const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j)) > tol) return false;
  return true;
}

bool Matrix::is_symmetric(double tol) const {
  if (!square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
  Matrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data_) v *= s;
  return c;
}

SymmetricEigen eigen_symmetric(const Matrix& input) {
  if (!input.square()) throw Error(ErrorCode::DimensionMismatch, "eigen_symmetric needs a square matrix");
  const std::size_t n = input.rows();
  Matrix a = input;
  // Work on the symmetric part.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  const double norm = a.frobenius_norm();
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= 1e-15 * norm || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps) throw Error(ErrorCode::NoConvergence, "Jacobi eigenvalue sweeps exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> svd_small(const Matrix& input) {
  if (input.rows() > kSvdMaxSize || input.cols() > kSvdMaxSize)
    throw Error(ErrorCode::InvalidArgument, "svd_small supports matrices up to 64x64");
  for (double x : input.data())
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "svd_small needs finite entries");
  // Orthogonalize columns of the taller orientation.
  Matrix a = input.rows() >= input.cols() ? input : input.transpose();
  const std::size_t m = a.rows(), n = a.cols();
  if (n == 0) return {};

  constexpr int kMaxSweeps = 100;
  constexpr double kTol = 1e-14;
  // Columns this small relative to the whole matrix count as zero; rotating
  // against them would only shuffle rounding noise.
  const double negligible = std::pow(1e-16 * input.frobenius_norm(), 2);
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += a(k, p) * a(k, p);
          beta += a(k, q) * a(k, q);
          gamma += a(k, p) * a(k, q);
        }
        if (gamma == 0.0 || std::min(alpha, beta) <= negligible ||
            std::abs(gamma) <= kTol * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps) throw Error(ErrorCode::NoConvergence, "one-sided Jacobi SVD sweeps exhausted");

  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += a(k, j) * a(k, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double nuclear_norm(const Matrix& a) {
  auto sv = svd_small(a);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

namespace {

double psd_scale(const std::vector<double>& eigenvalues) {
  double scale = 0.0;
  for (double v : eigenvalues) scale = std::max(scale, std::abs(v));
  return scale;
}

}  // namespace

Matrix sqrt_psd(const Matrix& a) {
  auto eig = eigen_symmetric(a);
  const double scale = psd_scale(eig.values);
  const std::size_t n = a.rows();
  Matrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double lambda = eig.values[k];
    if (lambda < -1e-8 * scale)
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(lambda) + " is negative");
    double s = std::sqrt(std::max(lambda, 0.0));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += s * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return r;
}

CholeskyFactor cholesky_psd(const Matrix& cov) {
  if (!cov.square()) throw Error(ErrorCode::DimensionMismatch, "covariance must be square");
  const std::size_t n = cov.rows();
  const double scale = cov.max_abs();
  if (!cov.is_symmetric(1e-10 * std::max(scale, 1e-300)))
    throw Error(ErrorCode::NotPSD, "covariance is not symmetric");
  auto eig = eigen_symmetric(cov);
  const double eig_scale = psd_scale(eig.values);
  if (!eig.values.empty() && eig.values.front() < -1e-8 * eig_scale)
    throw Error(ErrorCode::NotPSD, "minimum eigenvalue " + std::to_string(eig.values.front()) + " is negative");

  CholeskyFactor out;
  out.factor = Matrix(n, n);
  Matrix& l = out.factor;
  const double zero_pivot = 1e-12 * std::max(eig_scale, 1e-300) * static_cast<double>(std::max<std::size_t>(n, 1));
  bool zero_seen = false;
  for (std::size_t j = 0; j < n; ++j) {
    double s = cov(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    if (s <= zero_pivot) {
      // Schur complement vanishes here: complete with a zero column.
      out.degenerate = true;
      zero_seen = true;
      continue;
    }
    if (zero_seen) out.ambiguous = true;
    double d = std::sqrt(s);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double r = cov(i, j);
      for (std::size_t k = 0; k < j; ++k) r -= l(i, k) * l(j, k);
      l(i, j) = r / d;
    }
  }
  return out;
}

}  // namespace nestedot
