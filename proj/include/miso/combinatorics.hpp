#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>

namespace miso::combinatorics {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k) as an arbitrary-precision integer.
inline BigInt big_binomial(int n, int k) {
  if (k < 0 || k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact at every step: r is C(n-k+i, i) here
  }
  return r;
}

/// C(n, k) in native integer arithmetic. Safe for n <= 62.
inline std::uint64_t binomial_u64(int n, int k) {
  if (n < 0 || n > 62) throw std::invalid_argument("binomial_u64: n out of range");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(r);
}

/// C(n, k) as a double, for use in floating-point accumulations.
inline double binomial(int n, int k) {
  return static_cast<double>(binomial_u64(n, k));
}

}  // namespace miso::combinatorics
