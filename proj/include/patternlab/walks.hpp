#pragma once

// Exact counts of +-1 lattice walks between levels, optionally confined to a strip.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "patternlab/combinatorics.hpp"
#include "patternlab/error.hpp"

namespace patternlab {

/// Walks of `length` steps from level `start` to level `end`. `lo`/`hi` are
/// inclusive barriers; an empty optional means unbounded on that side.
struct WalkSpec {
  int length = 0;
  int start = 0;
  int end = 0;
  std::optional<int> lo;
  std::optional<int> hi;
};

namespace detail {

inline void check_walk_spec(const WalkSpec& s) {
  require(s.length >= 0, Errc::InvalidArgument, "walk length must be non-negative");
  if (s.lo && s.hi) require(*s.lo <= *s.hi, Errc::InvalidArgument, "walk strip has lo > hi");
  if (s.lo)
    require(*s.lo <= s.start && *s.lo <= s.end, Errc::InvalidArgument, "walk endpoints lie below the lower barrier");
  if (s.hi)
    require(s.start <= *s.hi && s.end <= *s.hi, Errc::InvalidArgument, "walk endpoints lie above the upper barrier");
}

}  // namespace detail

/// Number of walks matching `spec`. Zero when the parity of length and displacement
/// differ or the displacement exceeds the length.
inline BigInt count_walks(const WalkSpec& spec) {
  detail::check_walk_spec(spec);
  const int shift = std::abs(spec.end - spec.start);
  if (shift > spec.length || (spec.length - shift) % 2 != 0) return 0;
  if (!spec.lo && !spec.hi) return binomial(spec.length, (spec.length + spec.end - spec.start) / 2);

  // Levels a walk can reach at all, clipped to the strip.
  const int lo = std::max(spec.lo.value_or(spec.start - spec.length), std::min(spec.start, spec.end) - spec.length);
  const int hi = std::min(spec.hi.value_or(spec.start + spec.length), std::max(spec.start, spec.end) + spec.length);
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  std::vector<BigInt> ways(width, 0);
  std::vector<BigInt> next(width, 0);
  ways[static_cast<std::size_t>(spec.start - lo)] = 1;
  for (int step = 0; step < spec.length; ++step) {
    for (auto& x : next) x = 0;
    for (std::size_t i = 0; i < width; ++i) {
      if (ways[i] == 0) continue;
      if (i + 1 < width) next[i + 1] += ways[i];
      if (i > 0) next[i - 1] += ways[i];
    }
    std::swap(ways, next);
  }
  return ways[static_cast<std::size_t>(spec.end - lo)];
}

/// Walks of `spec` that touch level h at some step (endpoints included).
inline BigInt count_walks_hitting(const WalkSpec& spec, int h) {
  const BigInt total = count_walks(spec);
  WalkSpec avoid = spec;
  if (h > std::max(spec.start, spec.end)) {
    avoid.hi = std::min(spec.hi.value_or(h - 1), h - 1);
  } else if (h < std::min(spec.start, spec.end)) {
    avoid.lo = std::max(spec.lo.value_or(h + 1), h + 1);
  } else {
    return total;  // a walk between the endpoints crosses every level in between
  }
  if (avoid.lo && avoid.hi && *avoid.lo > *avoid.hi) return total;
  return total - count_walks(avoid);
}

/// Reflection principle: for an unbounded spec and a barrier h strictly beyond both
/// endpoints, walks touching h are equinumerous with all walks from start to 2h - end.
inline bool reflection_identity_check(const WalkSpec& spec, int h) {
  require(!spec.lo && !spec.hi, Errc::InvalidArgument, "reflection identity is stated for unbounded walks");
  require(h > std::max(spec.start, spec.end) || h < std::min(spec.start, spec.end), Errc::InvalidArgument,
          "reflection barrier must lie beyond both endpoints");
  const BigInt reflected = count_walks(WalkSpec{spec.length, spec.start, 2 * h - spec.end, {}, {}});
  return count_walks_hitting(spec, h) == reflected;
}

/// Probability that a uniform walk of length L from a to b stays in [-bound, bound].
inline Rational segment_excursion_probability(int length, int a, int b, int bound) {
  require(bound >= 0 && std::abs(a) <= bound && std::abs(b) <= bound, Errc::InvalidArgument,
          "endpoints must lie within [-bound, bound]");
  const BigInt total = count_walks(WalkSpec{length, a, b, {}, {}});
  require(total != 0, Errc::ZeroDenominator,
          "no walks of length " + std::to_string(length) + " from " + std::to_string(a) + " to " + std::to_string(b));
  return Rational(count_walks(WalkSpec{length, a, b, -bound, bound}), total);
}

struct ExcursionMinimum {
  Rational probability;
  int start = 0;
  int end = 0;
};

/// Smallest confinement probability over endpoints a, b in [-window, window] that
/// admit a walk of length L. Ties go to the smallest (a, b).
inline ExcursionMinimum min_excursion_probability(int length, int window, int barrier) {
  require(window >= 0 && window <= barrier, Errc::InvalidArgument, "endpoint window must lie within the barrier");
  std::optional<ExcursionMinimum> best;
  for (int a = -window; a <= window; ++a) {
    for (int b = -window; b <= window; ++b) {
      if (count_walks(WalkSpec{length, a, b, {}, {}}) == 0) continue;
      const Rational p = segment_excursion_probability(length, a, b, barrier);
      if (!best || p < best->probability) best = ExcursionMinimum{p, a, b};
    }
  }
  require(best.has_value(), Errc::ZeroDenominator, "no admissible endpoints for this walk length");
  return *best;
}

}  // namespace patternlab
