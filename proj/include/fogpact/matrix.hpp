#pragma once

// Small dense matrices for the contract model. Dimensions are the number of
// resource types, so everything here is O(n^3) with n <= 64 and no attempt at
// blocking or sparsity.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fogpact {

using Vector = std::vector<double>;

inline constexpr std::size_t kMaxDimension = 64;

/// Positive definiteness threshold, relative to the largest eigenvalue.
inline constexpr double kTolPd = 1e-10;
/// Absolute slack on the smallest eigenvalue when accepting a PSD matrix.
inline constexpr double kTolPsd = 1e-9;
/// 1-norm condition number above which a linear system is treated as singular.
inline constexpr double kMaxCondition = 1e12;

/// Square, dense, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix. Symmetry is exact: the constructor rejects any pair with
/// entries[i][j] != entries[j][i] and set() writes both halves.
class SymMatrix {
 public:
  SymMatrix() = default;

  static SymMatrix zeros(std::size_t n);
  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> diag);
  static SymMatrix from_rows(const std::vector<Vector>& rows);
  /// Rows of the lower triangle: row i has i+1 entries.
  static SymMatrix from_lower_triangle(const std::vector<Vector>& rows);
  /// Accepts a full matrix that is symmetric up to `tol`, mirroring the mean.
  static SymMatrix symmetrize(const Matrix& m, double tol);

  std::size_t size() const noexcept { return m_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v);

  /// Off-diagonal entries zeroed.
  SymMatrix diagonal_part() const;
  SymMatrix scaled(double factor) const;
  bool is_diagonal() const;

  const Matrix& matrix() const noexcept { return m_; }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k is the eigenvector for values[k]
};

/// Cyclic Jacobi eigendecomposition.
SymEigen eigen_decompose(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);

/// True iff the smallest eigenvalue is >= -tol.
bool validate_psd(const SymMatrix& m, double tol);
/// Smallest eigenvalue > kTolPd * largest eigenvalue (and largest > 0).
bool is_positive_definite(const SymMatrix& m);

/// Throws SingularMatrix unless is_positive_definite(m).
SymMatrix invert(const SymMatrix& m);

/// LU with partial pivoting. Throws SingularMatrix on a vanishing pivot.
Vector solve_general(const Matrix& m, std::span<const double> v);
Matrix inverse_general(const Matrix& m);
/// Exact 1-norm condition number ||m||_1 * ||m^-1||_1; +inf when singular.
double condition_number(const Matrix& m);

/// L with L*L^T == m. Cholesky when m is positive definite, otherwise
/// V*sqrt(max(lambda, 0)) from the eigendecomposition. Throws NotPsd when
/// validate_psd(m, kTolPsd) fails.
Matrix sampling_factor(const SymMatrix& m);

Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, std::span<const double> x);
inline Vector multiply(const SymMatrix& a, std::span<const double> x) {
  return multiply(a.matrix(), x);
}
double dot(std::span<const double> x, std::span<const double> y);
/// x^T m x
double quadratic_form(const SymMatrix& m, std::span<const double> x);
double max_abs(std::span<const double> x);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace fogpact
