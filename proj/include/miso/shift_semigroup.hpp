#pragma once

// Closed-form norms for the right-shift semigroup on the half line with
// weight s ds.  (S(t)f)(s) = f(s - t) for s >= t and 0 otherwise, so a
// piecewise-constant f just has its breakpoints translated by t.  Because
// the weight is the polynomial s, every norm is an exact elementary
// integral and the whole module stays quadrature-free.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace miso::shift_semigroup {

/// One constant piece of a compactly supported step function on (0, inf).
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  std::complex<double> value{0.0, 0.0};
};

inline void require_valid(const std::vector<Piece>& pieces) {
  for (const auto& p : pieces) {
    if (!(p.lo >= 0.0) || !(p.hi > p.lo)) {
      throw std::invalid_argument(
          "shift_Lsds_norm: pieces need 0 <= lo < hi");
    }
  }
}

/// || S(t) f ||^2 in L^2(0, inf; s ds) for piecewise-constant f.
/// Each piece contributes |v|^2 * ((hi+t)^2 - (lo+t)^2) / 2.
inline double shift_Lsds_norm(double t, const std::vector<Piece>& pieces) {
  if (!(t >= 0.0)) throw std::invalid_argument("shift_Lsds_norm: t must be >= 0");
  require_valid(pieces);
  double acc = 0.0;
  for (const auto& p : pieces) {
    const double a = p.lo + t;
    const double b = p.hi + t;
    acc += std::norm(p.value) * 0.5 * (b * b - a * a);
  }
  return acc;
}

/// Indicator of (0, h) as a single piece; ||S(t) 1_(0,h)||^2 = t*h + h^2/2.
inline std::vector<Piece> indicator(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("indicator: h must be > 0");
  return {Piece{0.0, h, {1.0, 0.0}}};
}

/// Second difference of t |-> ||S(t) f||^2 with step h, anchored at t0.
/// The norm is affine in t, so this vanishes identically; exposing it makes
/// the 2-isometric growth of the shift directly checkable.
inline double second_difference(const std::vector<Piece>& pieces, double t0,
                                double h) {
  if (!(h > 0.0)) throw std::invalid_argument("second_difference: h must be > 0");
  return shift_Lsds_norm(t0 + 2.0 * h, pieces) -
         2.0 * shift_Lsds_norm(t0 + h, pieces) + shift_Lsds_norm(t0, pieces);
}

}  // namespace miso::shift_semigroup
