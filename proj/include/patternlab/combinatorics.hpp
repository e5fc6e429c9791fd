#pragma once

// Exact integer and rational arithmetic shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <string>

#include "patternlab/error.hpp"

namespace patternlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

/// (n)_m = n (n-1) ... (n-m+1); (n)_0 = 1.
inline BigInt falling_factorial(std::int64_t n, std::int64_t m) {
  require(m >= 0 && m <= n, Errc::InvalidArgument, "falling_factorial needs 0 <= m <= n");
  BigInt result = 1;
  for (std::int64_t i = 0; i < m; ++i) result *= n - i;
  return result;
}

// Pascal table for n <= 64. Every entry fits in 64 bits (max C(64,32) < 2^61).
namespace detail {
struct PascalTable {
  std::array<std::array<std::uint64_t, 65>, 65> c{};
  constexpr PascalTable() {
    for (int n = 0; n <= 64; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};
inline constexpr PascalTable pascal{};
}  // namespace detail

constexpr std::uint64_t binomial_u64(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > 64) return 0;
  return detail::pascal.c[n][k];
}

/// Rank of a k-subset (bit mask) in colexicographic order, 0-based.
constexpr std::uint64_t colex_rank(std::uint64_t bits) {
  std::uint64_t rank = 0;
  int i = 1;
  while (bits != 0) {
    const int pos = std::countr_zero(bits);
    rank += binomial_u64(pos, i);
    bits &= bits - 1;
    ++i;
  }
  return rank;
}

/// Next mask with the same popcount in increasing numeric (= colex) order.
/// Returns 0 once the masks would leave the low `n` bits.
constexpr std::uint64_t next_same_popcount(std::uint64_t v, int n) {
  if (v == 0) return 0;
  const std::uint64_t t = v | (v - 1);
  const std::uint64_t w = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  if (t + 1 == 0) return 0;  // carried out of the top bit
  if (n < 64 && (w >> n) != 0) return 0;
  return w;
}

constexpr std::uint64_t low_mask(int n) {
  return n >= 64 ? std::numeric_limits<std::uint64_t>::max() : ((std::uint64_t{1} << n) - 1);
}

/// Canonical "p/q" rendering; the denominator is always printed.
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline long double to_long_double(const Rational& r) {
  return boost::multiprecision::numerator(r).convert_to<long double>() /
         boost::multiprecision::denominator(r).convert_to<long double>();
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  require(den != 0, Errc::ZeroDenominator, "rational with zero denominator");
  return Rational(num, den);
}

}  // namespace patternlab
