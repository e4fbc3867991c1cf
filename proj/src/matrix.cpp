#include "fogpact/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "fogpact/error.hpp"

namespace fogpact {
namespace {

void check_dimension(std::size_t n) {
  if (n < 1 || n > kMaxDimension) {
    std::ostringstream msg;
    msg << "matrix dimension " << n << " outside [1, " << kMaxDimension << "]";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

void check_square(const std::vector<Vector>& rows) {
  check_dimension(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      std::ostringstream msg;
      msg << "row " << i << " has " << rows[i].size() << " entries, expected " << rows.size();
      throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
  }
}

// Lower-triangular Cholesky factor, or empty when a pivot is not safely
// positive.
std::vector<double> try_cholesky(const Matrix& a) {
  const std::size_t n = a.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  if (scale == 0.0) return {};
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 1e-12 * scale)) return {};
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = v / ljj;
    }
  }
  return l;
}

struct LuFactor {
  Matrix lu;
  std::vector<std::size_t> perm;
};

LuFactor lu_factor(const Matrix& m) {
  const std::size_t n = m.size();
  LuFactor f{m, std::vector<std::size_t>(n)};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  double scale = 0.0;
  for (double v : m.data()) scale = std::max(scale, std::abs(v));
  const double tiny = scale * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  Matrix& a = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    }
    if (!(std::abs(a(p, k)) > tiny)) {
      std::ostringstream msg;
      msg << "matrix is rank deficient (pivot " << k << " vanished)";
      throw Error(ErrorKind::SingularMatrix, msg.str());
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / a(k, k);
      a(i, k) = factor;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return f;
}

Vector lu_solve(const LuFactor& f, std::span<const double> v) {
  const std::size_t n = f.lu.size();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = v[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

double norm_one(const Matrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) col += std::abs(m(i, j));
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

Matrix::Matrix(std::size_t n, double fill) : n_(n), data_(n * n, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  check_square(rows);
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

SymMatrix SymMatrix::zeros(std::size_t n) {
  check_dimension(n);
  return SymMatrix(Matrix(n));
}

SymMatrix SymMatrix::identity(std::size_t n) {
  check_dimension(n);
  return SymMatrix(Matrix::identity(n));
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  check_dimension(diag.size());
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::from_rows(const std::vector<Vector>& rows) {
  Matrix m = Matrix::from_rows(rows);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (m(i, j) != m(j, i)) {
        std::ostringstream msg;
        msg << "matrix is not symmetric: entry (" << i << "," << j << ") = " << m(i, j)
            << " but (" << j << "," << i << ") = " << m(j, i);
        throw Error(ErrorKind::InvalidInstance, msg.str());
      }
    }
  }
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::from_lower_triangle(const std::vector<Vector>& rows) {
  check_dimension(rows.size());
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != i + 1) {
      std::ostringstream msg;
      msg << "lower-triangle row " << i << " has " << rows[i].size() << " entries, expected "
          << i + 1;
      throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
    for (std::size_t j = 0; j <= i; ++j) {
      m(i, j) = rows[i][j];
      m(j, i) = rows[i][j];
    }
  }
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::symmetrize(const Matrix& m, double tol) {
  check_dimension(m.size());
  Matrix s(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) {
        throw Error(ErrorKind::InvalidInstance, "matrix is not symmetric within tolerance");
      }
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SymMatrix(std::move(s));
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

SymMatrix SymMatrix::diagonal_part() const {
  Matrix d(size());
  for (std::size_t i = 0; i < size(); ++i) d(i, i) = m_(i, i);
  return SymMatrix(std::move(d));
}

SymMatrix SymMatrix::scaled(double factor) const {
  Matrix d(size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) d(i, j) = factor * m_(i, j);
  }
  return SymMatrix(std::move(d));
}

bool SymMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (m_(i, j) != 0.0) return false;
    }
  }
  return true;
}

SymEigen eigen_decompose(const SymMatrix& m) {
  const std::size_t n = m.size();
  Matrix a = m.matrix();
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };
  double full = 0.0;
  for (double x : a.data()) full += x * x;
  full = std::sqrt(full);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_norm() <= 1e-17 * full) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymEigen out{Vector(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double min_eigenvalue(const SymMatrix& m) { return eigen_decompose(m).values.front(); }

bool validate_psd(const SymMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

bool is_positive_definite(const SymMatrix& m) {
  const SymEigen e = eigen_decompose(m);
  const double hi = e.values.back();
  return hi > 0.0 && e.values.front() > kTolPd * hi;
}

SymMatrix invert(const SymMatrix& m) {
  if (!is_positive_definite(m)) {
    throw Error(ErrorKind::SingularMatrix, "matrix is not positive definite");
  }
  const std::size_t n = m.size();
  const std::vector<double> l = try_cholesky(m.matrix());
  if (l.empty()) throw Error(ErrorKind::SingularMatrix, "Cholesky factorization failed");

  // Solve L L^T X = I column by column.
  Matrix x(n);
  Vector y(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = (i == col) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * y[k];
      y[i] = s / l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * x(k, col);
      x(i, col) = s / l[i * n + i];
    }
  }
  return SymMatrix::symmetrize(x, std::numeric_limits<double>::infinity());
}

Vector solve_general(const Matrix& m, std::span<const double> v) {
  check_dimension(m.size());
  if (v.size() != m.size()) {
    throw Error(ErrorKind::DimensionMismatch, "right-hand side length does not match matrix");
  }
  return lu_solve(lu_factor(m), v);
}

Matrix inverse_general(const Matrix& m) {
  check_dimension(m.size());
  const LuFactor f = lu_factor(m);
  const std::size_t n = m.size();
  Matrix inv(n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const Vector col = lu_solve(f, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

double condition_number(const Matrix& m) {
  try {
    return norm_one(m) * norm_one(inverse_general(m));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix) return std::numeric_limits<double>::infinity();
    throw;
  }
}

Matrix sampling_factor(const SymMatrix& m) {
  if (!validate_psd(m, kTolPsd)) {
    std::ostringstream msg;
    msg << "matrix is not positive semi-definite (min eigenvalue " << min_eigenvalue(m) << ")";
    throw Error(ErrorKind::NotPsd, msg.str());
  }
  const std::size_t n = m.size();
  if (std::vector<double> l = try_cholesky(m.matrix()); !l.empty()) {
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) out(i, j) = l[i * n + j];
    }
    return out;
  }
  const SymEigen e = eigen_decompose(m);
  Matrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(e.values[k], 0.0));
    for (std::size_t i = 0; i < n; ++i) out(i, k) = e.vectors(i, k) * root;
  }
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "matrix sizes differ");
  const std::size_t n = a.size();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (a.size() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match matrix");
  }
  Vector y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double quadratic_form(const SymMatrix& m, std::span<const double> x) {
  const Vector mx = multiply(m, x);
  return dot(x, mx);
}

double max_abs(std::span<const double> x) {
  double best = 0.0;
  for (double v : x) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "matrix sizes differ");
  double best = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
  }
  return best;
}

}  // namespace fogpact
