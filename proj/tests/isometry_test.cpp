#include "miso/isometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "miso/combinatorics.hpp"
#include "miso/errors.hpp"
#include "miso/numerics.hpp"
#include "miso/semigroup.hpp"

namespace {

using miso::isometry::Verdict;
using miso::numerics::Complex;
using miso::numerics::Matrix;
using miso::numerics::Vector;

Matrix jordan(int n) {
  Matrix j = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  return j;
}

TEST(Beta, HandValuesAndUnitaries) {
  // beta_1(J_2) = J*J - I = diag(-1, 0)
  const auto b1 = miso::isometry::beta(jordan(2), 1);
  Matrix want(2, 2);
  want << -1.0, 0.0, 0.0, 0.0;
  EXPECT_LT(miso::numerics::max_abs(Matrix(b1.matrix - want)), 1e-15);

  std::mt19937_64 rng(5);
  const Matrix u = miso::numerics::random_unitary(4, rng);
  for (int m = 1; m <= 4; ++m) {
    const auto b = miso::isometry::beta(u, m);
    EXPECT_LT(miso::numerics::herm_norm(b.matrix), 1e-12 * b.scale) << "m=" << m;
  }
}

TEST(Beta, RecursionAndDefectSumsOnRandomSweep) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    const int dim = 1 + i % 16;
    const int m = 1 + i % 6;
    const Matrix t = miso::numerics::random_matrix(dim, dim, rng);
    EXPECT_LT(miso::isometry::beta_recursion_residual(t, m), 1e-10);
    EXPECT_LT(miso::isometry::sum_of_defects_residual(t, m), 1e-10);
    EXPECT_LT(miso::isometry::shifted_defect_residual(t, 1 + i % 3, 1 + i % 4), 1e-10);
  }
}

TEST(Classify, KnownOperatorClasses) {
  std::mt19937_64 rng(9);
  const Matrix u = miso::numerics::random_unitary(3, rng);
  EXPECT_EQ(miso::isometry::classify(u, 1).verdict, Verdict::MIsometric);

  const Matrix half = 0.5 * Matrix::Identity(2, 2);
  EXPECT_EQ(miso::isometry::classify(half, 1).verdict, Verdict::MConcave);

  const Matrix twice = 2.0 * Matrix::Identity(2, 2);
  EXPECT_EQ(miso::isometry::classify(twice, 1).verdict, Verdict::Neither);

  // Cayley cogenerator of the 2x2 Jordan block is 3-isometric but not
  // 1-isometric.
  const Matrix t = miso::semigroup::cayley_cogenerator(jordan(2));
  Matrix want(2, 2);
  want << -1.0, -2.0, 0.0, -1.0;
  EXPECT_LT(miso::numerics::max_abs(Matrix(t - want)), 1e-13);
  EXPECT_EQ(miso::isometry::classify(t, 3).verdict, Verdict::MIsometric);
  EXPECT_EQ(miso::isometry::classify(t, 1).verdict, Verdict::Neither);
}

TEST(DiscreteGrowth, MatchesDeclaredClass) {
  const Matrix t = miso::semigroup::cayley_cogenerator(jordan(2));
  Vector x(2);
  x << 1.0, Complex(0.5, -0.25);
  const auto diffs = miso::isometry::discrete_growth_check(
      t, x, 8, 3, Verdict::MIsometric, 1e-8);
  for (double d : diffs) EXPECT_LT(std::abs(d), 1e-8);

  // strict contraction: 1-concave, differences stay nonpositive
  const Matrix c = 0.5 * Matrix::Identity(2, 2);
  const auto concave = miso::isometry::discrete_growth_check(
      c, x, 8, 1, Verdict::MConcave, 1e-8);
  for (double d : concave) EXPECT_LE(d, 1e-12);

  // expansive scalar declared concave: classification mismatch
  const Matrix e = 1.5 * Matrix::Identity(2, 2);
  EXPECT_THROW(miso::isometry::discrete_growth_check(e, x, 8, 1,
                                                     Verdict::MConcave, 1e-8),
               miso::ClassError);
}

TEST(BinomSum, MatchesFloatingBruteForce) {
  EXPECT_TRUE(miso::isometry::binom_sum_verify(0, 1, 1));
  for (int N = 0; N <= 8; ++N) {
    for (int i = 0; i <= N; ++i) {
      for (int m = 1; m <= 5; ++m) {
        double lhs = 0.0;
        for (int j = i; j <= N; ++j) {
          const double sign = ((j - i) % 2 == 0) ? 1.0 : -1.0;
          lhs += sign * miso::combinatorics::binomial(N + m, j + m) *
                 miso::combinatorics::binomial(j, i);
        }
        const double rhs = miso::combinatorics::binomial(m - 1 + N - i, N - i);
        EXPECT_NEAR(lhs, rhs, 1e-6) << i << " " << N << " " << m;
        EXPECT_TRUE(miso::isometry::binom_sum_verify(i, N, m));
      }
    }
  }
}

TEST(Wold, SplitsUnitaryNilpotentAndMixed) {
  std::mt19937_64 rng(13);
  const Matrix u = miso::numerics::random_unitary(4, rng);
  const auto wu = miso::isometry::wold_split(u, 8);
  EXPECT_EQ(wu.unitary_basis.cols(), 4);
  EXPECT_EQ(wu.analytic_basis.cols(), 0);

  const auto wn = miso::isometry::wold_split(jordan(3), 8);
  EXPECT_EQ(wn.unitary_basis.cols(), 0);
  EXPECT_EQ(wn.analytic_basis.cols(), 3);

  Matrix mixed = Matrix::Zero(4, 4);
  mixed.topLeftCorner(2, 2) = miso::numerics::random_unitary(2, rng);
  mixed.bottomRightCorner(2, 2) = jordan(2);
  const auto wm = miso::isometry::wold_split(mixed, 8);
  EXPECT_EQ(wm.unitary_basis.cols(), 2);
  EXPECT_EQ(wm.analytic_basis.cols(), 2);

  // both bases orthonormal, unitary part invariant under T
  const Matrix g = wm.unitary_basis.adjoint() * wm.unitary_basis;
  EXPECT_LT(miso::numerics::max_abs(Matrix(g - Matrix::Identity(2, 2))), 1e-12);
  const Matrix moved = mixed * wm.unitary_basis;
  const Matrix proj = wm.unitary_basis * (wm.unitary_basis.adjoint() * moved);
  EXPECT_LT(miso::numerics::max_abs(Matrix(moved - proj)), 1e-12);
}

TEST(Wold, OrthonormalRangeRanks) {
  Matrix a(3, 2);
  a << 1.0, 2.0, 0.0, 0.0, 1.0, 2.0;  // rank 1
  EXPECT_EQ(miso::isometry::orthonormal_range(a).cols(), 1);
  std::mt19937_64 rng(15);
  const Matrix b = miso::numerics::random_matrix(5, 3, rng);
  EXPECT_EQ(miso::isometry::orthonormal_range(b).cols(), 3);
}

}  // namespace
