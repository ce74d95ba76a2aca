#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nestedot {

// Small dense row-major matrix. Sized for the closed-form Gaussian formulas
// (dT up to 64); nothing here is blocked or vectorized.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  Matrix block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_lower_triangular(double tol = 0.0) const;
  bool is_symmetric(double tol) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi rotations. Throws NoConvergence if the sweep cap is hit.
SymmetricEigen eigen_symmetric(const Matrix& a);

inline constexpr std::size_t kSvdMaxSize = 64;

// Singular values in descending order via one-sided Jacobi, m, n <= kSvdMaxSize.
std::vector<double> svd_small(const Matrix& a);
double nuclear_norm(const Matrix& a);

// Symmetric PSD square root; eigenvalues in [-1e-8 * scale, 0) are clipped,
// anything more negative throws NotPSD.
Matrix sqrt_psd(const Matrix& a);

struct CholeskyFactor {
  Matrix factor;            // lower triangular, factor * factor^T = input
  bool degenerate = false;  // a zero pivot was completed with a zero column
  bool ambiguous = false;   // a zero pivot preceded a nonzero one: other lower-triangular factors exist
};

// Cholesky factorization that accepts singular PSD input.
CholeskyFactor cholesky_psd(const Matrix& cov);

}  // namespace nestedot
