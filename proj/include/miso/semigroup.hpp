#pragma once

#include <algorithm>
#include <vector>

#include "miso/combinatorics.hpp"
#include "miso/isometry.hpp"
#include "miso/numerics.hpp"

namespace miso::semigroup {

using numerics::Complex;
using numerics::Matrix;
using numerics::Vector;

/// Hermitian matrix of the sesquilinear form
/// alpha_m^A(y1, y2) = sum_{j=0..m} C(m,j) <A^j y1, A^(m-j) y2>,
/// i.e. sum_{j} C(m,j) (A^(m-j))* A^j, plus the accumulation scale.
struct AlphaForm {
  int order;
  Matrix matrix;
  double scale;
};

inline AlphaForm alpha_form(const Matrix& a, int m) {
  numerics::require_square(a, "alpha_form");
  if (m < 0) throw std::invalid_argument("alpha_form: order must be nonnegative");
  const int n = static_cast<int>(a.rows());
  std::vector<Matrix> powers(m + 1);
  powers[0] = Matrix::Identity(n, n);
  for (int j = 1; j <= m; ++j) powers[j] = a * powers[j - 1];
  Matrix acc = Matrix::Zero(n, n);
  double max_term = 0.0;
  for (int j = 0; j <= m; ++j) {
    const Matrix term = combinatorics::binomial(m, j) * (powers[m - j].adjoint() * powers[j]);
    max_term = std::max(max_term, numerics::max_abs(term));
    acc += term;
  }
  acc = 0.5 * (acc + acc.adjoint().eval());
  return {m, acc, 1.0 + max_term};
}

/// Relative residual of alpha_{m+1} = A* alpha_m + alpha_m A.
inline double alpha_recursion_residual(const Matrix& a, int m) {
  const AlphaForm lhs = alpha_form(a, m + 1);
  const AlphaForm prev = alpha_form(a, m);
  const Matrix rhs = a.adjoint() * prev.matrix + prev.matrix * a;
  const double scale = std::max({lhs.scale, prev.scale, 1.0 + numerics::max_abs(rhs)});
  return (lhs.matrix - rhs).norm() / scale;
}

struct SkewSymmetryCheck {
  bool verdict;
  double residual;  ///< ||alpha_m(A)|| (spectral), absolute
};

/// A is m-skew-symmetric when alpha_m^A vanishes.
inline SkewSymmetryCheck is_m_skew_symmetric(const Matrix& a, int m, double tol = 1e-10) {
  const AlphaForm f = alpha_form(a, m);
  const double norm = numerics::herm_norm(f.matrix);
  return {norm <= tol * f.scale, norm};
}

/// Cayley cogenerator T = (A + I)(A - I)^(-1). Throws CayleyPoleError when
/// A - I is singular (1 in the spectrum of A).
inline Matrix cayley_cogenerator(const Matrix& a) {
  numerics::require_square(a, "cayley_cogenerator");
  const Matrix i = Matrix::Identity(a.rows(), a.cols());
  try {
    return (a + i) * numerics::inverse(a - i);
  } catch (const SingularMatrixError&) {
    throw CayleyPoleError("cayley_cogenerator: A - I is singular");
  }
}

/// Inverse Cayley transform A = (T + I)(T - I)^(-1). Throws CayleyPoleError
/// when T - I is singular (1 in the spectrum of T).
inline Matrix cayley_generator(const Matrix& t) {
  numerics::require_square(t, "cayley_generator");
  const Matrix i = Matrix::Identity(t.rows(), t.cols());
  try {
    return (t + i) * numerics::inverse(t - i);
  } catch (const SingularMatrixError&) {
    throw CayleyPoleError("cayley_generator: T - I is singular");
  }
}

/// Relative residual of the bridge identity
/// beta_m(T) = 2^m ((A-I)^(-m))* alpha_m^A (A-I)^(-m), T the cogenerator of A.
inline double beta_alpha_bridge_residual(const Matrix& a, int m) {
  const Matrix t = cayley_cogenerator(a);
  const isometry::DefectForm lhs = isometry::beta(t, m);
  const Matrix inv = numerics::inverse(a - Matrix::Identity(a.rows(), a.cols()));
  Matrix invm = Matrix::Identity(a.rows(), a.cols());
  for (int j = 0; j < m; ++j) invm = inv * invm;
  const AlphaForm af = alpha_form(a, m);
  const Matrix rhs = std::exp2(m) * (invm.adjoint() * af.matrix * invm);
  const double scale = std::max(lhs.scale, 1.0 + numerics::max_abs(rhs));
  return (lhs.matrix - rhs).norm() / scale;
}

struct GrowthPolynomial {
  /// c_j = alpha_j^A(x) / j! for j = 0..m-1; the orbit satisfies
  /// ||e^(tA) x||^2 = sum_j c_j t^j when A is m-skew-symmetric.
  std::vector<double> coefficients;
};

inline GrowthPolynomial growth_polynomial(const Matrix& a, const Vector& x, int m) {
  if (m < 1) throw std::invalid_argument("growth_polynomial: m must be positive");
  if (!is_m_skew_symmetric(a, m).verdict) {
    throw ClassError("growth_polynomial: A is not m-skew-symmetric");
  }
  GrowthPolynomial p;
  p.coefficients.resize(m);
  double factorial = 1.0;
  for (int j = 0; j < m; ++j) {
    if (j > 0) factorial *= j;
    p.coefficients[j] = (x.adjoint() * alpha_form(a, j).matrix * x)(0).real() / factorial;
  }
  return p;
}

inline double eval_poly(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

/// Smallest w with Re<Ay, y> <= w ||y||^2, i.e. lambda_max((A + A*)/2).
inline double dissipativity_w(const Matrix& a) {
  numerics::require_square(a, "dissipativity_w");
  return numerics::herm_lambda_max(0.5 * (a + a.adjoint()));
}

/// Composite-Simpson quadrature of the Laplace transform
/// integral_0^horizon e^(tA) e^(-lambda t) dt, approximating (lambda - A)^(-1).
/// Throws DivergentIntegralError when lambda <= dissipativity_w(A).
inline Matrix resolvent_quadrature(const Matrix& a, double lambda, double horizon, int steps) {
  numerics::require_square(a, "resolvent_quadrature");
  if (horizon <= 0.0 || steps < 2) {
    throw std::invalid_argument("resolvent_quadrature: bad quadrature parameters");
  }
  if (lambda <= dissipativity_w(a)) {
    throw DivergentIntegralError("resolvent_quadrature: lambda inside the growth bound");
  }
  if (steps % 2 != 0) ++steps;
  const double h = horizon / steps;
  const Matrix step = numerics::mat_exp(a, h) * std::exp(-lambda * h);
  Matrix cur = Matrix::Identity(a.rows(), a.cols());
  Matrix acc = cur;  // weight 1 at t = 0
  for (int i = 1; i < steps; ++i) {
    cur = step * cur;
    acc += (i % 2 == 1 ? 4.0 : 2.0) * cur;
  }
  cur = step * cur;
  acc += cur;
  return acc * (h / 3.0);
}

/// Relative agreement between the m-th order difference
/// sum_k (-1)^(m-k) C(m,k) ||e^(khA) y||^2 and the m-fold iterated integral
/// of alpha_m^A over [0,h]^m, evaluated by tensor-product Simpson collapsed
/// onto the diagonal sum (the integrand depends only on s_1 + ... + s_m).
inline double difference_quotient_check(const Matrix& a, const Vector& y, int m, double h,
                                        int nodes_per_axis = 64) {
  if (m < 1 || h <= 0.0) throw std::invalid_argument("difference_quotient_check: bad input");
  int n = nodes_per_axis;
  if (n % 2 != 0) ++n;
  double lhs = 0.0;
  for (int k = 0; k <= m; ++k) {
    const Vector v = numerics::mat_exp(a, k * h) * y;
    const double sgn = ((m - k) % 2 == 0) ? 1.0 : -1.0;
    lhs += sgn * combinatorics::binomial(m, k) * v.squaredNorm();
  }
  // 1-D Simpson weights on [0,h], then m-fold convolution.
  std::vector<double> w(n + 1, 0.0);
  w[0] = w[n] = h / (3.0 * n);
  for (int i = 1; i < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / (3.0 * n);
  std::vector<double> conv = w;
  for (int fold = 1; fold < m; ++fold) {
    std::vector<double> next(conv.size() + n, 0.0);
    for (std::size_t i = 0; i < conv.size(); ++i)
      for (int j = 0; j <= n; ++j) next[i + j] += conv[i] * w[j];
    conv = std::move(next);
  }
  const Matrix am = alpha_form(a, m).matrix;
  const Matrix estep = numerics::mat_exp(a, h / n);
  Vector cur = y;
  double rhs = 0.0;
  for (std::size_t s = 0; s < conv.size(); ++s) {
    rhs += conv[s] * (cur.adjoint() * am * cur)(0).real();
    if (s + 1 < conv.size()) cur = estep * cur;
  }
  return std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
}

/// Domination check for m-concave generators: requires
/// lambda_max(alpha_m^A) <= pre_tol * scale (ClassError otherwise), then
/// verifies ||e^(tA) x||^2 <= sum_{j<m} t^j/j! alpha_j(x) + tol * scale on a
/// fixed grid in [0, 5]. Returns true when the domination holds everywhere.
inline bool concave_growth_check(const Matrix& a, const Vector& x, int m,
                                 double pre_tol = 1e-10, double tol = 1e-7) {
  if (m < 1) throw std::invalid_argument("concave_growth_check: m must be positive");
  const AlphaForm am = alpha_form(a, m);
  if (numerics::herm_lambda_max(am.matrix) > pre_tol * am.scale) {
    throw ClassError("concave_growth_check: A is not m-concave");
  }
  std::vector<double> c(m);
  double factorial = 1.0;
  for (int j = 0; j < m; ++j) {
    if (j > 0) factorial *= j;
    c[j] = (x.adjoint() * alpha_form(a, j).matrix * x)(0).real() / factorial;
  }
  static const double grid[] = {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 5.0};
  double scale = 1.0;
  for (double t : grid) scale = std::max(scale, 1.0 + std::abs(eval_poly(c, t)));
  for (double t : grid) {
    const Vector v = numerics::mat_exp(a, t) * x;
    if (v.squaredNorm() > eval_poly(c, t) + tol * scale) return false;
  }
  return true;
}

}  // namespace miso::semigroup
