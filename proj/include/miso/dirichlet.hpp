#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "miso/combinatorics.hpp"
#include "miso/measures.hpp"
#include "miso/numerics.hpp"

namespace miso::dirichlet {

using measures::kPi;
using measures::kTwoPi;
using measures::OperatorMeasure;
using measures::unit_circle_point;
using measures::unit_circle_power;
using numerics::Complex;
using numerics::Matrix;
using numerics::Vector;

/// Polynomial with vector coefficients: f(z) = sum_k coeffs[k] z^k.
struct VecPoly {
  int dim = 1;
  std::vector<Vector> coeffs;

  static VecPoly scalar(std::vector<Complex> c) {
    VecPoly p;
    p.dim = 1;
    p.coeffs.reserve(c.size());
    for (Complex v : c) {
      Vector e(1);
      e(0) = v;
      p.coeffs.push_back(std::move(e));
    }
    return p;
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  Vector at(int k) const {
    if (k < 0 || k > degree()) return Vector::Zero(dim);
    return coeffs[k];
  }

  Vector evaluate(Complex z) const {
    Vector v = Vector::Zero(dim);
    for (int k = degree(); k >= 0; --k) v = z * v + coeffs[k];
    return v;
  }

  double h2_norm_sq() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += c.squaredNorm();
    return s;
  }
};

/// f(z) * z^j.
inline VecPoly shift(const VecPoly& f, int j) {
  VecPoly g;
  g.dim = f.dim;
  g.coeffs.assign(j, Vector::Zero(f.dim));
  g.coeffs.insert(g.coeffs.end(), f.coeffs.begin(), f.coeffs.end());
  return g;
}

/// Product of a scalar-coefficient polynomial with a VecPoly.
inline VecPoly scalar_multiply(const std::vector<double>& c, const VecPoly& f) {
  VecPoly g;
  g.dim = f.dim;
  if (f.coeffs.empty() || c.empty()) return g;
  g.coeffs.assign(c.size() + f.coeffs.size() - 1, Vector::Zero(f.dim));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) g.coeffs[i + k] += c[i] * f.coeffs[k];
  }
  return g;
}

inline VecPoly subtract(const VecPoly& f, const VecPoly& g) {
  VecPoly h;
  h.dim = f.dim;
  h.coeffs.assign(std::max(f.coeffs.size(), g.coeffs.size()), Vector::Zero(f.dim));
  for (std::size_t k = 0; k < h.coeffs.size(); ++k) {
    h.coeffs[k] = f.at(static_cast<int>(k)) - g.at(static_cast<int>(k));
  }
  return h;
}

/// Gram matrix of the monomials z^k x up to degree N in the harmonically
/// weighted space: block (l, k) = delta_{lk} I + min(k, l) mu_hat(l - k),
/// so that ||f||^2 = c* G c for the stacked coefficient vector c.
struct GramTruncation {
  int N;
  int dim;
  Matrix G;
};

inline GramTruncation gram(const OperatorMeasure& mu, int N) {
  if (N < 0) throw std::invalid_argument("gram: N must be nonnegative");
  const int d = mu.dim();
  const int size = (N + 1) * d;
  Matrix g = Matrix::Zero(size, size);
  std::vector<Matrix> hats(2 * N + 1);
  for (int n = -N; n <= N; ++n) hats[n + N] = mu.fourier(n);
  for (int l = 0; l <= N; ++l) {
    for (int k = 0; k <= N; ++k) {
      Matrix block = static_cast<double>(std::min(k, l)) * hats[(l - k) + N];
      if (l == k) block += Matrix::Identity(d, d);
      g.block(l * d, k * d, d, d) = block;
    }
  }
  g = 0.5 * (g + g.adjoint().eval());
  return {N, d, std::move(g)};
}

inline Vector stack_coeffs(const VecPoly& f, int N) {
  Vector c = Vector::Zero((N + 1) * f.dim);
  for (int k = 0; k <= std::min(N, f.degree()); ++k) c.segment(k * f.dim, f.dim) = f.coeffs[k];
  return c;
}

/// ||f||^2 in the truncated space (degree of f must not exceed g.N).
inline double norm_sq(const GramTruncation& g, const VecPoly& f) {
  if (f.degree() > g.N) throw std::invalid_argument("norm_sq: degree exceeds truncation");
  if (f.dim != g.dim) throw std::invalid_argument("norm_sq: dimension mismatch");
  const Vector c = stack_coeffs(f, g.N);
  return (c.adjoint() * g.G * c)(0).real();
}

/// Dirichlet energy D_mu(f) = sum_{k,l >= 1} min(k,l) <mu_hat(l-k) f_k, f_l>.
inline double dirichlet_energy(const OperatorMeasure& mu, const VecPoly& f) {
  if (f.dim != mu.dim()) throw std::invalid_argument("dirichlet_energy: dimension mismatch");
  const int n = f.degree();
  Complex acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      acc += static_cast<double>(std::min(k, l)) *
             (f.coeffs[l].adjoint() * mu.fourier(l - k) * f.coeffs[k])(0);
    }
  }
  return acc.real();
}

/// Boundary pairing (1/2pi) int <dmu f, g> = sum_{k,l} <mu_hat(l-k) f_k, g_l>.
inline Complex boundary_form(const OperatorMeasure& mu, const VecPoly& f, const VecPoly& g) {
  if (f.dim != mu.dim() || g.dim != mu.dim()) {
    throw std::invalid_argument("boundary_form: dimension mismatch");
  }
  Complex acc = 0.0;
  for (int k = 0; k <= f.degree(); ++k) {
    for (int l = 0; l <= g.degree(); ++l) {
      acc += (g.coeffs[l].adjoint() * mu.fourier(l - k) * f.coeffs[k])(0);
    }
  }
  return acc;
}

/// Relative residual of the defect identity
/// ||z f||^2 - ||f||^2 = (1/2pi) int <dmu f, f>.
inline double defect_formula_residual(const OperatorMeasure& mu, const VecPoly& f) {
  const GramTruncation g = gram(mu, f.degree() + 1);
  const double n1 = norm_sq(g, shift(f, 1));
  const double n0 = norm_sq(g, f);
  const double bf = boundary_form(mu, f, f).real();
  const double scale = 1.0 + std::max({std::abs(n1), std::abs(n0), std::abs(bf)});
  return std::abs((n1 - n0) - bf) / scale;
}

/// Matrix of the quadratic form f -> <beta_m(M_z) f, f> on coefficients of
/// degree <= N: Q = sum_j (-1)^(m-j) C(m,j) S_j* G_{N+m} S_j with S_j the
/// shift embedding; assembled directly from shifted blocks of gram(mu, N+m).
inline Matrix mz_defect_form(const OperatorMeasure& mu, int N, int m) {
  if (N < 0 || m < 0) throw std::invalid_argument("mz_defect_form: bad orders");
  const int d = mu.dim();
  const GramTruncation big = gram(mu, N + m);
  const int size = (N + 1) * d;
  Matrix q = Matrix::Zero(size, size);
  for (int j = 0; j <= m; ++j) {
    const double coeff = combinatorics::binomial(m, j) * (((m - j) % 2 == 0) ? 1.0 : -1.0);
    for (int l = 0; l <= N; ++l) {
      for (int k = 0; k <= N; ++k) {
        q.block(l * d, k * d, d, d) += coeff * big.G.block((l + j) * d, (k + j) * d, d, d);
      }
    }
  }
  return 0.5 * (q + q.adjoint().eval());
}

/// Local Dirichlet integral at a unimodular point by the quotient formula:
/// D_zeta(f) = || (f - f(zeta)) / (z - zeta) ||^2_{H^2}, with the quotient
/// obtained by synthetic division.
inline double local_dirichlet(const VecPoly& f, Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) {
    throw std::invalid_argument("local_dirichlet: zeta must be unimodular");
  }
  const int n = f.degree();
  if (n <= 0) return 0.0;
  double acc = 0.0;
  Vector q = f.coeffs[n];  // quotient coefficient q_{n-1}
  acc += q.squaredNorm();
  for (int k = n - 1; k >= 1; --k) {
    q = f.coeffs[k] + zeta * q;
    acc += q.squaredNorm();
  }
  return acc;
}

/// Relative residual between the series Dirichlet energy and the atomic
/// localization formula D_mu(f) = (1/2pi) sum_j mass_j D_{zeta_j}(f),
/// for scalar atomic measures.
inline double fubini_residual(const OperatorMeasure& mu, const VecPoly& f) {
  if (mu.dim() != 1 || !mu.density().empty()) {
    throw std::invalid_argument("fubini_residual: measure must be scalar atomic");
  }
  const double series = dirichlet_energy(mu, f);
  double local = 0.0;
  for (const auto& atom : mu.atoms()) {
    local += atom.weight(0, 0).real() *
             local_dirichlet(f, unit_circle_point(atom.angle_over_pi)) / kTwoPi;
  }
  return std::abs(series - local) / (1.0 + std::max(std::abs(series), std::abs(local)));
}

/// Taylor coefficients of the inner functions phi_t(z) = exp(t (z+1)/(z-1)).
struct PhiCoefficients {
  double t;
  std::vector<double> coeffs;
};

/// Three-term recurrence obtained from (z-1)^2 phi_t' = -2t phi_t:
/// a_{n+1} = ((2n - 2t) a_n - (n-1) a_{n-1}) / (n+1), a_0 = exp(-t).
inline PhiCoefficients phi_coeffs(double t, int M) {
  if (t < 0.0 || M < 0) throw std::invalid_argument("phi_coeffs: bad parameters");
  PhiCoefficients p;
  p.t = t;
  p.coeffs.resize(M + 1, 0.0);
  p.coeffs[0] = std::exp(-t);
  if (M >= 1) p.coeffs[1] = -2.0 * t * p.coeffs[0];
  for (int n = 1; n < M; ++n) {
    p.coeffs[n + 1] =
        ((2.0 * n - 2.0 * t) * p.coeffs[n] - (n - 1.0) * p.coeffs[n - 1]) / (n + 1.0);
  }
  return p;
}

/// D_zeta(phi_t) = 2t / |1 - zeta|^2 for unimodular zeta != 1.
inline double local_dirichlet_phi(double t, Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) {
    throw std::invalid_argument("local_dirichlet_phi: zeta must be unimodular");
  }
  if (std::abs(zeta - 1.0) < 1e-12) {
    throw PoleAtOneError("local_dirichlet_phi: zeta = 1 is the singular point");
  }
  return 2.0 * t / std::norm(1.0 - zeta);
}

/// ||f||^2_{H^2} + D_mu(f) without forming the Gram matrix: atoms through
/// tail sums (sum_{i>=1} <W T_i, T_i> with T_i = sum_{k>=i} zeta^k f_k, the
/// series form of the quotient formula), density through its band structure.
/// Identical to the gram quadratic form; usable at large degree.
inline double dirichlet_norm_sq(const OperatorMeasure& mu, const VecPoly& f) {
  if (f.dim != mu.dim()) throw std::invalid_argument("dirichlet_norm_sq: dimension mismatch");
  const int n = f.degree();
  double total = f.h2_norm_sq();
  for (const auto& atom : mu.atoms()) {
    Vector tail = Vector::Zero(f.dim);
    double acc = 0.0;
    for (int i = n; i >= 1; --i) {
      tail += unit_circle_power(atom.angle_over_pi, i) * f.coeffs[i];
      acc += (tail.adjoint() * atom.weight * tail)(0).real();
    }
    total += acc / kTwoPi;
  }
  for (const auto& [m, c] : mu.density()) {
    if (m < 0) continue;  // n and -n handled together via conjugate symmetry
    Complex acc = 0.0;
    for (int k = 1; k + m <= n; ++k) {
      acc += static_cast<double>(k) * (f.coeffs[k + m].adjoint() * c * f.coeffs[k])(0);
    }
    total += (m == 0) ? acc.real() : 2.0 * acc.real();
  }
  return total;
}

/// Both evaluation routes for the multiplier identity
/// ||phi_t f||^2 = ||f||^2 + (t/pi) sum_j <(W_j / |1-zeta_j|^2) f(zeta_j), f(zeta_j)>
/// on atomic measures.
/// ||phi_t f||^2 for atomic mu through the local Douglas route: the inner
/// factor preserves the H^2 norm and adds |s(zeta)|^2 D_zeta(phi_t) to each
/// scalarized local energy (eigen-decomposing every atom weight).
inline double phi_product_norm_sq(const OperatorMeasure& mu, const VecPoly& f,
                                  double t) {
  if (!mu.density().empty()) {
    throw std::invalid_argument("phi_product_norm_sq: measure must be atomic");
  }
  if (f.dim != mu.dim()) {
    throw std::invalid_argument("phi_product_norm_sq: dimension mismatch");
  }
  double exact = f.h2_norm_sq();
  for (const auto& atom : mu.atoms()) {
    const Complex zeta = unit_circle_point(atom.angle_over_pi);
    const numerics::HermEig w = numerics::herm_eig(atom.weight);
    for (int p = 0; p < w.eigenvalues.size(); ++p) {
      const double wp = w.eigenvalues(p);
      if (wp == 0.0) continue;
      const Vector v = w.eigenvectors.col(p);
      VecPoly s;
      s.dim = 1;
      for (const auto& ck : f.coeffs) {
        Vector e(1);
        e(0) = (v.adjoint() * ck)(0);
        s.coeffs.push_back(std::move(e));
      }
      const double local = local_dirichlet(s, zeta) +
                           std::norm(s.evaluate(zeta)(0)) * local_dirichlet_phi(t, zeta);
      exact += wp * local / kTwoPi;
    }
  }
  return exact;
}

struct MultiplicationCheck {
  double exact_path;        ///< inner-multiplier closed form
  double truncated_path;    ///< Gram norm of the truncated series product
  double rhs;               ///< right-hand side above
  double residual_exact;    ///< |exact_path - rhs|
  double residual_truncated;
  int truncation_degree;
};

inline MultiplicationCheck multiplication_formula_residual(const OperatorMeasure& mu,
                                                           const VecPoly& f, double t,
                                                           int start_degree = 64) {
  if (!mu.density().empty()) {
    throw std::invalid_argument("multiplication_formula_residual: measure must be atomic");
  }
  if (f.dim != mu.dim()) {
    throw std::invalid_argument("multiplication_formula_residual: dimension mismatch");
  }
  MultiplicationCheck out{};
  // Right-hand side.
  double boundary = 0.0;
  for (const auto& atom : mu.atoms()) {
    const Complex zeta = unit_circle_point(atom.angle_over_pi);
    const Vector fz = f.evaluate(zeta);
    boundary += (fz.adjoint() * atom.weight * fz)(0).real() / std::norm(1.0 - zeta);
  }
  out.rhs = dirichlet_norm_sq(mu, f) + (t / kPi) * boundary;
  out.exact_path = phi_product_norm_sq(mu, f, t);
  // Truncated path: Cauchy increments below 1e-8 under degree doubling.
  int m = std::max(start_degree, 16);
  double prev = 0.0;
  bool have_prev = false;
  while (true) {
    const PhiCoefficients phi = phi_coeffs(t, m);
    const double val = dirichlet_norm_sq(mu, scalar_multiply(phi.coeffs, f));
    if (have_prev && std::abs(val - prev) < 1e-8) {
      out.truncated_path = val;
      out.truncation_degree = m;
      break;
    }
    prev = val;
    have_prev = true;
    if (m >= (1 << 19)) {
      out.truncated_path = val;
      out.truncation_degree = m;
      break;
    }
    m *= 2;
  }
  out.residual_exact = std::abs(out.exact_path - out.rhs);
  out.residual_truncated = std::abs(out.truncated_path - out.rhs);
  return out;
}

/// Largest ratio of the boundary form against ||(I - M_z) f||^2 over
/// polynomials of degree <= N: the finite-section estimate of the constant
/// in condition (ii).
inline double estimate_w1(const OperatorMeasure& mu, int N) {
  const int d = mu.dim();
  const int size = (N + 1) * d;
  Matrix q = Matrix::Zero(size, size);
  for (int l = 0; l <= N; ++l)
    for (int k = 0; k <= N; ++k) q.block(l * d, k * d, d, d) = mu.fourier(l - k);
  q = 0.5 * (q + q.adjoint().eval());
  const GramTruncation big = gram(mu, N + 1);
  Matrix embed = Matrix::Zero((N + 2) * d, size);  // coefficients of (1 - z) f
  for (int k = 0; k <= N; ++k) {
    embed.block(k * d, k * d, d, d) += Matrix::Identity(d, d);
    embed.block((k + 1) * d, k * d, d, d) -= Matrix::Identity(d, d);
  }
  const Matrix gp = embed.adjoint() * big.G * embed;
  return numerics::gen_eig_max(q, 0.5 * (gp + gp.adjoint().eval()));
}

/// Finite-section estimate of the constant in condition (iii): the boundary
/// form of dmu / |1-zeta|^2 against the full space norm. std::nullopt when
/// the tilde measure diverges.
inline std::optional<double> estimate_w2(const OperatorMeasure& mu, int N,
                                         int quad_points = 512) {
  const std::optional<OperatorMeasure> tilde = measures::tilde_measure(mu, quad_points);
  if (!tilde) return std::nullopt;
  const int d = mu.dim();
  const int size = (N + 1) * d;
  Matrix q = Matrix::Zero(size, size);
  for (int l = 0; l <= N; ++l)
    for (int k = 0; k <= N; ++k) q.block(l * d, k * d, d, d) = tilde->fourier(l - k);
  q = 0.5 * (q + q.adjoint().eval());
  return numerics::gen_eig_max(q, gram(mu, N).G);
}

/// ||f - k_r f||^2 along rGrid, k_r(z) = (1-z)/(1-rz) truncated where
/// r^M <= 1e-12. Norms go through the band/tail evaluation (identical to the
/// gram form) because M grows like log(1e-12)/log(r).
inline std::vector<double> kr_convergence_report(const OperatorMeasure& mu, const VecPoly& f,
                                                 const std::vector<double>& r_grid) {
  std::vector<double> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 0.0 && r < 1.0)) {
      throw std::invalid_argument("kr_convergence_report: r must lie in (0, 1)");
    }
    const int m = std::min(
        1000000, static_cast<int>(std::ceil(std::log(1e-12) / std::log(r))));
    std::vector<double> kr(m + 2, 0.0);
    kr[0] = 1.0;
    double rp = 1.0;  // r^j
    for (int j = 1; j <= m; ++j) {
      kr[j] = rp * (r - 1.0);  // r^j - r^(j-1)
      rp *= r;
    }
    kr[m + 1] = -rp;
    out.push_back(dirichlet_norm_sq(mu, subtract(f, scalar_multiply(kr, f))));
  }
  return out;
}

/// Matrix of the compression of M_z to degrees <= N, expressed on an
/// orthonormal basis (Cholesky-standardized): T = L* (G_N^{-1} B) L^{-*}
/// with B[l][k] = <z^{k+1}, z^l> and G_N = L L*.
inline Matrix model_shift_matrix(const OperatorMeasure& mu, int N) {
  const int d = mu.dim();
  const int size = (N + 1) * d;
  const GramTruncation gn = gram(mu, N);
  const GramTruncation gn1 = gram(mu, N + 1);
  Matrix b = Matrix::Zero(size, size);
  for (int l = 0; l <= N; ++l)
    for (int k = 0; k <= N; ++k) b.block(l * d, k * d, d, d) = gn1.G.block(l * d, (k + 1) * d, d, d);
  const Matrix m = numerics::solve(gn.G, b);
  const Eigen::LLT<Matrix> llt(gn.G);
  if (llt.info() != Eigen::Success) {
    throw SingularGramError("model_shift_matrix: gram matrix not positive definite", 0.0);
  }
  const Matrix u = llt.matrixL().adjoint();  // upper factor, G = U* U
  const Matrix w = numerics::solve(u.transpose(), m.transpose()).transpose();  // M U^{-1}
  return u * w;
}

}  // namespace miso::dirichlet
