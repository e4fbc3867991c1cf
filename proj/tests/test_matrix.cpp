#include <gtest/gtest.h>

#include "fogpact/error.hpp"
#include "fogpact/matrix.hpp"
#include "test_support.hpp"

namespace fogpact {
namespace {

using testing::Rng;

void expect_near(const Matrix& a, const Matrix& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE(max_abs_diff(a, b), tol);
}

TEST(SymMatrix, RejectsAsymmetricRows) {
  EXPECT_THROW(SymMatrix::from_rows({{1.0, 2.0}, {2.0000001, 1.0}}), Error);
  EXPECT_NO_THROW(SymMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}));
}

TEST(SymMatrix, LowerTriangleIsMirrored) {
  const SymMatrix m = SymMatrix::from_lower_triangle({{1.0}, {0.5, 2.0}, {0.1, 0.2, 3.0}});
  EXPECT_EQ(m(0, 2), 0.1);
  EXPECT_EQ(m(2, 0), 0.1);
  EXPECT_EQ(m(1, 2), 0.2);
  EXPECT_THROW(SymMatrix::from_lower_triangle({{1.0}, {0.5}}), Error);
}

TEST(SymMatrix, DimensionBounds) {
  EXPECT_THROW(SymMatrix::zeros(0), Error);
  EXPECT_THROW(SymMatrix::identity(kMaxDimension + 1), Error);
  EXPECT_NO_THROW(SymMatrix::identity(kMaxDimension));
}

TEST(SymMatrix, SetKeepsSymmetry) {
  SymMatrix m = SymMatrix::zeros(3);
  m.set(0, 2, 4.0);
  EXPECT_EQ(m(2, 0), 4.0);
  EXPECT_FALSE(m.is_diagonal());
  EXPECT_TRUE(m.diagonal_part().is_diagonal());
}

TEST(ValidatePsd, Examples) {
  EXPECT_TRUE(validate_psd(SymMatrix::identity(2), 1e-9));
  // eigenvalues {3, -1}
  EXPECT_FALSE(validate_psd(SymMatrix::from_rows({{1, 2}, {2, 1}}), 1e-9));
  // eigenvalues {2, 0}
  EXPECT_TRUE(validate_psd(SymMatrix::from_rows({{1, 1}, {1, 1}}), 1e-9));
}

TEST(Eigen, TwoByTwoMatchesCharacteristicPolynomial) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = testing::uniform(rng, -5, 5);
    const double b = testing::uniform(rng, -5, 5);
    const double d = testing::uniform(rng, -5, 5);
    const double mean = 0.5 * (a + d);
    const double radius = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    const SymEigen e = eigen_decompose(SymMatrix::from_rows({{a, b}, {b, d}}));
    EXPECT_NEAR(e.values[0], mean - radius, 1e-12);
    EXPECT_NEAR(e.values[1], mean + radius, 1e-12);
  }
}

TEST(Eigen, ReconstructsRandomSymmetric) {
  Rng rng(12);
  for (std::size_t n = 1; n <= 12; ++n) {
    const SymMatrix m = testing::gram(rng, n, -3.0, 3.0, -2.0);
    const SymEigen e = eigen_decompose(m);
    Matrix recon(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          recon(i, j) += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
        }
      }
    }
    expect_near(recon, m.matrix(), 1e-10);
    for (std::size_t k = 1; k < n; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(Invert, Examples) {
  expect_near(invert(SymMatrix::identity(3)).matrix(), Matrix::identity(3), 0.0);
  const Vector d{2.0, 4.0};
  const SymMatrix inv = invert(SymMatrix::diagonal(d));
  EXPECT_DOUBLE_EQ(inv(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(inv(1, 1), 0.25);
  EXPECT_EQ(inv(0, 1), 0.0);
  // adjugate of [[2,1],[1,2]] over det 3
  const SymMatrix m = invert(SymMatrix::from_rows({{2, 1}, {1, 2}}));
  EXPECT_NEAR(m(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m(0, 1), -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m(1, 1), 2.0 / 3.0, 1e-15);
}

TEST(Invert, RejectsSingularAndIndefinite) {
  try {
    invert(SymMatrix::from_rows({{1, 1}, {1, 1}}));
    FAIL() << "expected SingularMatrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
  }
  EXPECT_THROW(invert(SymMatrix::from_rows({{1, 2}, {2, 1}})), Error);
  EXPECT_THROW(invert(SymMatrix::zeros(2)), Error);
  // min/max eigenvalue ratio 1e-11 is below the relative threshold.
  const Vector tiny{1.0, 1e-11};
  EXPECT_THROW(invert(SymMatrix::diagonal(tiny)), Error);
}

TEST(Invert, ResidualAndInvolutionOnRandomPd) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    // Entries stay within [-10, 10]: |(A^T A)_ij| <= n for A in [-1, 1].
    const SymMatrix m = testing::gram(rng, n, -1.0, 1.0, 1.0);
    ASSERT_LE(max_abs(m.matrix().data()), 10.0);
    const SymMatrix inv = invert(m);
    expect_near(multiply(m.matrix(), inv.matrix()), Matrix::identity(n), 1e-10);
    expect_near(invert(inv).matrix(), m.matrix(), 1e-8);
    expect_near(inv.matrix(), testing::gauss_jordan_inverse(m.matrix()), 1e-10);
  }
}

TEST(SolveGeneral, Examples) {
  const Vector v{3.0, 7.0};
  EXPECT_EQ(solve_general(Matrix::identity(2), v), v);
  const Vector x = solve_general(Matrix::from_rows({{2, 0}, {0, 5}}), Vector{2, 5});
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
  const Vector y = solve_general(Matrix::from_rows({{1, 1}, {0, 1}}), Vector{2, 1});
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);
}

TEST(SolveGeneral, RankDeficientThrows) {
  try {
    solve_general(Matrix::from_rows({{1, 2}, {2, 4}}), Vector{1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
  }
  EXPECT_THROW(solve_general(Matrix::identity(2), Vector{1, 2, 3}), Error);
  EXPECT_TRUE(std::isinf(condition_number(Matrix::from_rows({{1, 2}, {2, 4}}))));
}

TEST(SolveGeneral, AgreesWithInverseOnRandomPd) {
  Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const SymMatrix m = testing::gram(rng, n, -1.0, 1.0, 0.5);
    Vector v(n);
    for (double& x : v) x = testing::uniform(rng, -3, 3);
    const Vector x = solve_general(m.matrix(), v);
    const Vector via_inverse = multiply(invert(m), v);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], via_inverse[i], 1e-9);
    const Vector r = multiply(m.matrix(), x);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(r[i] - v[i]), 1e-10 * max_abs(v));
  }
}

TEST(SolveGeneral, NonSymmetricResidual) {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    Matrix m = testing::random_matrix(rng, n, -1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 3.0;
    Vector v(n);
    for (double& x : v) x = testing::uniform(rng, -3, 3);
    const Vector x = solve_general(m, v);
    const Vector r = multiply(m, x);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(std::abs(r[i] - v[i]), 1e-10 * max_abs(v));
  }
}

Matrix outer(const Matrix& l) {
  return multiply(l, l.transposed());
}

TEST(SamplingFactor, Examples) {
  expect_near(sampling_factor(SymMatrix::identity(3)), Matrix::identity(3), 0.0);
  const Vector d{4.0, 9.0};
  const Matrix l = sampling_factor(SymMatrix::diagonal(d));
  EXPECT_EQ(l(0, 0), 2.0);
  EXPECT_EQ(l(1, 1), 3.0);
  EXPECT_EQ(l(0, 1), 0.0);
  EXPECT_EQ(sampling_factor(SymMatrix::zeros(3)), Matrix(3));
  const Vector degenerate{4.0, 0.0};
  const Matrix ld = sampling_factor(SymMatrix::diagonal(degenerate));
  EXPECT_EQ(ld(1, 0), 0.0);
  EXPECT_EQ(ld(1, 1), 0.0);
}

TEST(SamplingFactor, RejectsIndefinite) {
  try {
    sampling_factor(SymMatrix::from_rows({{1, 2}, {2, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPsd);
  }
}

TEST(SamplingFactor, ReconstructsRandomPsd) {
  Rng rng(16);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    // Rank-deficient about half the time: B has fewer independent rows.
    Matrix b = testing::random_matrix(rng, n, -2.0, 2.0);
    if (trial % 2 == 1 && n > 1) {
      for (std::size_t j = 0; j < n; ++j) b(n - 1, j) = b(0, j);
      for (std::size_t j = 0; j < n; ++j) b(0, j) = 0.0;
    }
    const SymMatrix m = SymMatrix::symmetrize(multiply(b.transposed(), b), 1e-12);
    EXPECT_LE(max_abs_diff(outer(sampling_factor(m)), m.matrix()), 1e-8);
  }
}

TEST(Helpers, DotAndQuadraticForm) {
  EXPECT_DOUBLE_EQ(dot(Vector{1, 2, 3}, Vector{4, 5, 6}), 32.0);
  EXPECT_DOUBLE_EQ(quadratic_form(SymMatrix::from_rows({{2, 1}, {1, 2}}), Vector{1, 1}), 6.0);
  EXPECT_THROW(dot(Vector{1}, Vector{1, 2}), Error);
}

}  // namespace
}  // namespace fogpact
