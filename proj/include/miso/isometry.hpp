#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <vector>

#include "miso/combinatorics.hpp"
#include "miso/numerics.hpp"

namespace miso::isometry {

using numerics::Complex;
using numerics::Matrix;
using numerics::Vector;

/// Hermitian defect operator of order m together with the magnitude of the
/// largest summand encountered while accumulating it. Residual and tolerance
/// checks are taken relative to that scale.
struct DefectForm {
  int order;
  Matrix matrix;
  double scale;
};

/// beta_m(T) = sum_{j=0..m} (-1)^(m-j) C(m,j) T*^j T^j.
inline DefectForm beta(const Matrix& t, int m) {
  numerics::require_square(t, "beta");
  if (m < 0) throw std::invalid_argument("beta: order must be nonnegative");
  const int n = static_cast<int>(t.rows());
  Matrix acc = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);  // T^j
  double max_term = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double coeff = combinatorics::binomial(m, j);
    const Matrix term = coeff * (power.adjoint() * power);
    max_term = std::max(max_term, numerics::max_abs(term));
    if ((m - j) % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
    if (j < m) power = t * power;
  }
  acc = 0.5 * (acc + acc.adjoint().eval());
  return {m, acc, 1.0 + max_term};
}

/// Relative Frobenius residual of beta_{m+1}(T) = T* beta_m(T) T - beta_m(T).
inline double beta_recursion_residual(const Matrix& t, int m) {
  const DefectForm lhs = beta(t, m + 1);
  const DefectForm prev = beta(t, m);
  const Matrix rhs = t.adjoint() * prev.matrix * t - prev.matrix;
  const double scale = std::max({lhs.scale, prev.scale, 1.0 + numerics::max_abs(rhs)});
  return (lhs.matrix - rhs).norm() / scale;
}

/// Relative residual of T*^k T^k = sum_{j=0..k} C(k,j) beta_j(T).
inline double sum_of_defects_residual(const Matrix& t, int k) {
  numerics::require_square(t, "sum_of_defects_residual");
  if (k < 0) throw std::invalid_argument("sum_of_defects_residual: k must be nonnegative");
  const int n = static_cast<int>(t.rows());
  Matrix rhs = Matrix::Zero(n, n);
  double scale = 1.0;
  for (int j = 0; j <= k; ++j) {
    const DefectForm bj = beta(t, j);
    rhs += combinatorics::binomial(k, j) * bj.matrix;
    scale = std::max(scale, bj.scale);
  }
  Matrix power = Matrix::Identity(n, n);
  for (int j = 0; j < k; ++j) power = t * power;
  const Matrix lhs = power.adjoint() * power;
  scale = std::max(scale, 1.0 + numerics::max_abs(lhs));
  return (lhs - rhs).norm() / scale;
}

enum class Verdict { MIsometric, MConcave, Neither };

struct OperatorClass {
  Verdict verdict;
  /// ||beta_m(T)|| (spectral) for the isometry test, lambda_max(beta_m(T))
  /// when the verdict is m-concave.
  double residual;
};

/// Classify T against order m at a tolerance relative to the defect scale:
/// m-isometric when ||beta_m(T)|| <= tol * scale, else m-concave when
/// lambda_max(beta_m(T)) <= tol * scale.
inline OperatorClass classify(const Matrix& t, int m, double tol = 1e-10) {
  const DefectForm b = beta(t, m);
  const numerics::HermEig eig = numerics::herm_eig(b.matrix);
  const double norm = b.matrix.size() == 0 ? 0.0 : eig.eigenvalues.cwiseAbs().maxCoeff();
  const double lmax = b.matrix.size() == 0 ? 0.0 : eig.eigenvalues.maxCoeff();
  if (norm <= tol * b.scale) return {Verdict::MIsometric, norm};
  if (lmax <= tol * b.scale) return {Verdict::MConcave, lmax};
  return {Verdict::Neither, norm};
}

/// Differences ||T^k x||^2 - sum_{j<m} C(k,j) <beta_j(T) x, x> for
/// k = 0..kmax. The operator must classify as `declared` of order m
/// (ClassError otherwise). For an m-isometry the differences vanish; for an
/// m-concave operator they stay below tolerance from above.
inline std::vector<double> discrete_growth_check(const Matrix& t, const Vector& x, int kmax,
                                                 int m, Verdict declared, double tol = 1e-10) {
  if (m < 1) throw std::invalid_argument("discrete_growth_check: m must be positive");
  const OperatorClass cls = classify(t, m, tol);
  const bool ok = cls.verdict == declared ||
                  (declared == Verdict::MConcave && cls.verdict == Verdict::MIsometric);
  if (!ok) throw ClassError("discrete_growth_check: operator does not match declared class");
  std::vector<double> moments(m);
  for (int j = 0; j < m; ++j) {
    moments[j] = (x.adjoint() * beta(t, j).matrix * x)(0).real();
  }
  std::vector<double> diffs;
  diffs.reserve(kmax + 1);
  Vector orbit = x;
  for (int k = 0; k <= kmax; ++k) {
    double bound = 0.0;
    for (int j = 0; j < std::min(m, k + 1); ++j) {
      bound += combinatorics::binomial(k, j) * moments[j];
    }
    diffs.push_back(orbit.squaredNorm() - bound);
    orbit = t * orbit;
  }
  return diffs;
}

/// Relative residual of the shifted defect formula
/// beta_{j+m}(T) = sum_{i=0..j} (-1)^(j-i) C(j,i) T*^i beta_m(T) T^i.
inline double shifted_defect_residual(const Matrix& t, int m, int j) {
  if (m < 0 || j < 0) throw std::invalid_argument("shifted_defect_residual: negative order");
  const DefectForm lhs = beta(t, m + j);
  const Matrix bm = beta(t, m).matrix;
  const int n = static_cast<int>(t.rows());
  Matrix rhs = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);  // T^i
  double scale = lhs.scale;
  for (int i = 0; i <= j; ++i) {
    const Matrix term = combinatorics::binomial(j, i) * (power.adjoint() * bm * power);
    scale = std::max(scale, 1.0 + numerics::max_abs(term));
    if ((j - i) % 2 == 0) {
      rhs += term;
    } else {
      rhs -= term;
    }
    if (i < j) power = t * power;
  }
  return (lhs.matrix - rhs).norm() / scale;
}

/// Exact check of the alternating binomial identity
///   sum_{j=i..N} (-1)^(j-i) C(N+m, j+m) C(j, i) = C(m-1+N-i, N-i)
/// in arbitrary-precision integer arithmetic.
inline bool binom_sum_verify(int i, int N, int m) {
  using combinatorics::BigInt;
  using combinatorics::big_binomial;
  if (i < 0 || N < i || m < 1) throw std::invalid_argument("binom_sum_verify: bad range");
  BigInt lhs = 0;
  for (int j = i; j <= N; ++j) {
    const BigInt term = big_binomial(N + m, j + m) * big_binomial(j, i);
    if ((j - i) % 2 == 0) {
      lhs += term;
    } else {
      lhs -= term;
    }
  }
  const BigInt rhs = big_binomial(m - 1 + N - i, N - i);
  return lhs == rhs;
}

/// Orthonormal basis of the column span of m; columns whose singular value
/// falls below tol * sigma_max are dropped.
inline Matrix orthonormal_range(const Matrix& m, double tol = 1e-10) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() == 0 ? 0.0 : sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * smax && smax > 0.0) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

struct WoldSplit {
  Matrix unitary_basis;   ///< orthonormal basis of the intersection of ranges of T^n
  Matrix analytic_basis;  ///< orthonormal basis of span of T^n (H - TH)
};

/// Numerical Wold decomposition data. The range intersection iterates
/// R_{n+1} = orth(T R_n); once the dimension is stable for one step it is
/// stable forever, so iteration stops there (or at nmax).
inline WoldSplit wold_split(const Matrix& t, int nmax, double tol = 1e-10) {
  numerics::require_square(t, "wold_split");
  const int n = static_cast<int>(t.rows());
  Matrix r = orthonormal_range(t, tol);
  for (int step = 0; step < nmax; ++step) {
    Matrix next = orthonormal_range(t * r, tol);
    const bool stable = next.cols() == r.cols();
    r = next;
    if (stable) break;
  }
  // H - TH: left null space of T.
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() == 0 ? 0.0 : sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (smax > 0.0 && sv(i) > tol * smax) ++rank;
  }
  const Matrix wandering = svd.matrixU().rightCols(n - rank);
  Matrix stack(n, static_cast<Eigen::Index>(wandering.cols()) * (nmax + 1));
  Matrix cur = wandering;
  for (int k = 0; k <= nmax; ++k) {
    stack.middleCols(static_cast<Eigen::Index>(k) * wandering.cols(), wandering.cols()) = cur;
    if (k < nmax) cur = t * cur;
  }
  return {r, orthonormal_range(stack, tol)};
}

}  // namespace miso::isometry
