#pragma once

// Counter-based generator: draw i of stream s under seed x is a fixed function of
// (x, s, i), so results do not depend on platform, thread count or scheduling.
// Distributions are implemented here too; the standard ones are not portable.

#include <bit>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "patternlab/error.hpp"

namespace patternlab {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(detail::splitmix64(detail::splitmix64(seed) ^ detail::splitmix64(~stream))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return detail::splitmix64(key_ + 0xD1B54A32D192ED03ULL * ++counter_); }

  /// Uniform integer in [0, bound), bound >= 1 (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t floor = (0 - bound) % bound;
      while (low < floor) {
        product = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniformly random `count`-subset of the set bits of `pool`, as a bit mask.
  std::uint64_t subset_of(std::uint64_t pool, int count) {
    require(count >= 0 && count <= std::popcount(pool), Errc::InvalidArgument, "subset larger than its pool");
    std::vector<int> elements;
    for (std::uint64_t b = pool; b != 0; b &= b - 1) elements.push_back(std::countr_zero(b));
    std::uint64_t out = 0;
    // Partial Fisher-Yates over the element list.
    for (int i = 0; i < count; ++i) {
      const auto j = static_cast<std::size_t>(i) + below(elements.size() - static_cast<std::size_t>(i));
      std::swap(elements[static_cast<std::size_t>(i)], elements[j]);
      out |= std::uint64_t{1} << elements[static_cast<std::size_t>(i)];
    }
    return out;
  }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace patternlab
