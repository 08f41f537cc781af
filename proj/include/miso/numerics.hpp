#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <random>

#include "miso/errors.hpp"

namespace miso::numerics {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Reference magnitude used by all relative tolerances: 1 + max entry modulus.
inline double scale_of(const Matrix& a) { return 1.0 + max_abs(a); }

inline bool is_hermitian(const Matrix& h, double tol = 1e-12) {
  if (h.rows() != h.cols()) return false;
  return max_abs(h - h.adjoint()) <= tol * scale_of(h);
}

inline void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
}

struct HermEig {
  RealVector eigenvalues;  ///< ascending
  Matrix eigenvectors;     ///< columns, orthonormal
};

/// Spectral decomposition of a Hermitian matrix.
/// Rejects inputs whose Hermitian defect exceeds 1e-12 relative to scale.
inline HermEig herm_eig(const Matrix& h) {
  require_square(h, "herm_eig");
  if (!is_hermitian(h)) {
    throw NonHermitianError("herm_eig: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Operator (spectral) norm of a Hermitian matrix.
inline double herm_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  HermEig e = herm_eig(h);
  return e.eigenvalues.cwiseAbs().maxCoeff();
}

/// Largest eigenvalue of a Hermitian matrix.
inline double herm_lambda_max(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  return herm_eig(h).eigenvalues.maxCoeff();
}

/// Largest generalized eigenvalue of Q v = lambda G v with Hermitian Q and
/// positive definite G. Throws SingularGramError when G has an eigenvalue
/// at or below 1e-12 * ||G||.
inline double gen_eig_max(const Matrix& q, const Matrix& g) {
  require_square(q, "gen_eig_max");
  if (q.rows() != g.rows()) {
    throw std::invalid_argument("gen_eig_max: dimension mismatch");
  }
  if (!is_hermitian(q) || !is_hermitian(g)) {
    throw NonHermitianError("gen_eig_max: both matrices must be Hermitian");
  }
  HermEig ge = herm_eig(g);
  const double gnorm = ge.eigenvalues.cwiseAbs().maxCoeff();
  const double gmin = ge.eigenvalues.minCoeff();
  if (gmin <= 1e-12 * gnorm) {
    throw SingularGramError("gen_eig_max: right-hand matrix is numerically singular", gmin);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(
      0.5 * (q + q.adjoint()), 0.5 * (g + g.adjoint()),
      Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    throw std::runtime_error("gen_eig_max: solver did not converge");
  }
  return ges.eigenvalues().maxCoeff();
}

/// Solve A X = B by LU with full pivoting; pivots below 1e-13 of the largest
/// one are treated as zero and reported as singularity.
inline Matrix solve(const Matrix& a, const Matrix& b) {
  require_square(a, "solve");
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("solve: dimension mismatch");
  }
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw SingularMatrixError("solve: matrix is numerically singular");
  }
  return lu.solve(b);
}

inline Matrix inverse(const Matrix& a) {
  return solve(a, Matrix::Identity(a.rows(), a.cols()));
}

namespace detail {

inline double l1_norm(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

// Pade approximants of orders 3/5/7/9/13 for expm, Higham's coefficients.
inline void pade3(const Matrix& a, Matrix& u, Matrix& v) {
  static const double b[] = {120., 60., 12., 1.};
  const Matrix i = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  u = a * (b[3] * a2 + b[1] * i);
  v = b[2] * a2 + b[0] * i;
}

inline void pade5(const Matrix& a, Matrix& u, Matrix& v) {
  static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  const Matrix i = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  u = a * (b[5] * a4 + b[3] * a2 + b[1] * i);
  v = b[4] * a4 + b[2] * a2 + b[0] * i;
}

inline void pade7(const Matrix& a, Matrix& u, Matrix& v) {
  static const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  const Matrix i = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
  v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
}

inline void pade9(const Matrix& a, Matrix& u, Matrix& v) {
  static const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                             2162160.,     110880.,     3960.,       90.,        1.};
  const Matrix i = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix a8 = a6 * a2;
  u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
  v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
}

inline void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                             1187353796428800.,  129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,       1323241920.,
                             40840800.,          960960.,            16380.,
                             182.,               1.};
  const Matrix i = Matrix::Identity(a.rows(), a.cols());
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * i);
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
}

}  // namespace detail

/// exp(t A) by scaling and squaring with Pade approximants.
/// See N. J. Higham, "The scaling and squaring method for the matrix
/// exponential revisited", SIAM J. Matrix Anal. Appl. 26(4), 2005.
inline Matrix mat_exp(const Matrix& a, double t = 1.0) {
  require_square(a, "mat_exp");
  if (a.size() == 0) return a;
  Matrix b = t * a;
  const double norm = detail::l1_norm(b);
  Matrix u, v;
  int squarings = 0;
  if (norm < 1.495585217958292e-2) {
    detail::pade3(b, u, v);
  } else if (norm < 2.539398330063230e-1) {
    detail::pade5(b, u, v);
  } else if (norm < 9.504178996162932e-1) {
    detail::pade7(b, u, v);
  } else if (norm < 2.097847961257068e0) {
    detail::pade9(b, u, v);
  } else {
    const double max_norm = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / max_norm))));
    b *= std::exp2(static_cast<double>(-squarings));
    detail::pade13(b, u, v);
  }
  Matrix numer = u + v;
  Matrix denom = -u + v;
  Matrix r = denom.partialPivLu().solve(numer);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

// --- deterministic random generators ------------------------------------
//
// Draws go through an explicit bit mapping (not std::uniform_real_distribution,
// whose output is implementation-defined) so that seeded sweeps reproduce
// bit-identically everywhere.

inline double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
}

inline Complex random_complex(std::mt19937_64& rng) {
  const double re = uniform_pm1(rng);
  const double im = uniform_pm1(rng);
  return {re, im};
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
  return m;
}

inline Vector random_vector(int n, std::mt19937_64& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = random_complex(rng);
  return v;
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
  Matrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

inline Matrix random_skew_adjoint(int n, std::mt19937_64& rng) {
  Matrix m = random_matrix(n, n, rng);
  return 0.5 * (m - m.adjoint());
}

inline Matrix random_unitary(int n, std::mt19937_64& rng) {
  Matrix m = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ();
}

/// Random Hermitian positive definite matrix (unit shift keeps it well away
/// from singular).
inline Matrix random_spd(int n, std::mt19937_64& rng) {
  Matrix m = random_matrix(n, n, rng);
  return m.adjoint() * m + Matrix::Identity(n, n);
}

}  // namespace miso::numerics
