#pragma once

// Subsets of [n] as machine words, difference patterns, and the pattern predicate pat(A, B).

#include <algorithm>
#include <bit>
#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

#include "patternlab/combinatorics.hpp"
#include "patternlab/error.hpp"

namespace patternlab {

inline constexpr int kMaxGround = 64;

namespace detail {

// Gathers the bits of `value` selected by `mask` into the low bits, preserving order.
inline std::uint64_t extract_bits(std::uint64_t value, std::uint64_t mask) {
#if defined(__BMI2__)
  return _pext_u64(value, mask);
#else
  std::uint64_t out = 0;
  int i = 0;
  while (mask != 0) {
    const std::uint64_t low = mask & -mask;
    if (value & low) out |= std::uint64_t{1} << i;
    ++i;
    mask ^= low;
  }
  return out;
#endif
}

// Inverse of extract_bits: scatters the low bits of `value` onto the positions of `mask`.
inline std::uint64_t deposit_bits(std::uint64_t value, std::uint64_t mask) {
#if defined(__BMI2__)
  return _pdep_u64(value, mask);
#else
  std::uint64_t out = 0;
  int i = 0;
  while (mask != 0) {
    const std::uint64_t low = mask & -mask;
    if ((value >> i) & 1) out |= low;
    ++i;
    mask ^= low;
  }
  return out;
#endif
}

inline std::uint64_t reverse_low_bits(std::uint64_t bits, int width) {
  std::uint64_t out = 0;
  for (int i = 0; i < width; ++i)
    if ((bits >> i) & 1) out |= std::uint64_t{1} << (width - 1 - i);
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// A subset of the ground set [n], 1 <= n <= 64. Element i is stored in bit i-1.
class SubsetWord {
 public:
  SubsetWord() = default;

  SubsetWord(int n, std::uint64_t bits) : n_(n), bits_(bits) {
    require(n >= 1 && n <= kMaxGround, Errc::InvalidArgument,
            "ground set size must lie in [1, 64], got " + std::to_string(n));
    require((bits & ~low_mask(n)) == 0, Errc::InvalidArgument, "set bits beyond the ground set");
  }

  static SubsetWord from_elements(int n, std::span<const int> elements) {
    std::uint64_t bits = 0;
    for (int e : elements) {
      require(e >= 1 && e <= n, Errc::InvalidArgument,
              "element " + std::to_string(e) + " outside [1," + std::to_string(n) + "]");
      bits |= std::uint64_t{1} << (e - 1);
    }
    return SubsetWord(n, bits);
  }
  static SubsetWord from_elements(int n, std::initializer_list<int> elements) {
    return from_elements(n, std::span<const int>(elements.begin(), elements.size()));
  }
  static SubsetWord empty(int n) { return SubsetWord(n, 0); }
  static SubsetWord full(int n) { return SubsetWord(n, low_mask(n)); }
  /// The interval [lo, hi] of [n] (empty when lo > hi).
  static SubsetWord interval(int n, int lo, int hi) {
    if (lo > hi) return empty(n);
    require(lo >= 1 && hi <= n, Errc::InvalidArgument, "interval outside the ground set");
    return SubsetWord(n, low_mask(hi) & ~low_mask(lo - 1));
  }

  int n() const noexcept { return n_; }
  std::uint64_t bits() const noexcept { return bits_; }
  int size() const noexcept { return std::popcount(bits_); }
  bool is_empty() const noexcept { return bits_ == 0; }
  bool contains(int element) const noexcept {
    return element >= 1 && element <= n_ && ((bits_ >> (element - 1)) & 1);
  }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  SubsetWord complement() const { return SubsetWord(n_, ~bits_ & low_mask(n_)); }

  /// Image under the relabeling i -> n + 1 - i.
  SubsetWord reversed() const { return SubsetWord(n_, detail::reverse_low_bits(bits_, n_)); }

  bool is_subset_of(const SubsetWord& other) const { return (bits_ & ~other.bits_) == 0; }
  bool is_disjoint_from(const SubsetWord& other) const { return (bits_ & other.bits_) == 0; }

  friend SubsetWord operator|(const SubsetWord& a, const SubsetWord& b) {
    check_same_ground(a, b);
    return SubsetWord(a.n_, a.bits_ | b.bits_);
  }
  friend SubsetWord operator&(const SubsetWord& a, const SubsetWord& b) {
    check_same_ground(a, b);
    return SubsetWord(a.n_, a.bits_ & b.bits_);
  }
  friend SubsetWord operator^(const SubsetWord& a, const SubsetWord& b) {
    check_same_ground(a, b);
    return SubsetWord(a.n_, a.bits_ ^ b.bits_);
  }
  friend SubsetWord operator-(const SubsetWord& a, const SubsetWord& b) {
    check_same_ground(a, b);
    return SubsetWord(a.n_, a.bits_ & ~b.bits_);
  }

  friend bool operator==(const SubsetWord&, const SubsetWord&) = default;
  // Colex order within a ground set: compare the bit vectors as integers.
  friend std::strong_ordering operator<=>(const SubsetWord& a, const SubsetWord& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

  /// Canonical text: sorted elements joined by ',' ("1,3,4"); the empty set prints as "{}".
  std::string to_string() const {
    if (bits_ == 0) return "{}";
    std::string out;
    for (int e : elements()) {
      if (!out.empty()) out += ',';
      out += std::to_string(e);
    }
    return out;
  }

  /// Accepts "1,3,4", "{1,3,4}", "{}", "" or a hex bit vector "0x0d".
  static SubsetWord parse(std::string_view text, int n) {
    text = detail::trim(text);
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
      std::uint64_t bits = 0;
      const auto body = text.substr(2);
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), bits, 16);
      require(ec == std::errc() && ptr == body.data() + body.size() && !body.empty(), Errc::ParseError,
              "bad hex set '" + std::string(text) + "'");
      require((bits & ~low_mask(n)) == 0, Errc::ParseError, "hex set exceeds ground set");
      return SubsetWord(n, bits);
    }
    if (!text.empty() && text.front() == '{') {
      require(text.back() == '}', Errc::ParseError, "unbalanced braces in '" + std::string(text) + "'");
      text = detail::trim(text.substr(1, text.size() - 2));
    }
    std::vector<int> elems;
    while (!text.empty()) {
      const auto comma = text.find(',');
      const auto token = detail::trim(text.substr(0, comma));
      int value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      require(ec == std::errc() && ptr == token.data() + token.size() && !token.empty(), Errc::ParseError,
              "bad set element '" + std::string(token) + "'");
      require(value >= 1 && value <= n, Errc::ParseError,
              "element " + std::to_string(value) + " outside [1," + std::to_string(n) + "]");
      elems.push_back(value);
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
      require(!detail::trim(text).empty(), Errc::ParseError, "trailing comma in set");
    }
    return from_elements(n, elems);
  }

 private:
  static void check_same_ground(const SubsetWord& a, const SubsetWord& b) {
    require(a.n_ == b.n_, Errc::GroundMismatch,
            "ground sets differ (" + std::to_string(a.n_) + " vs " + std::to_string(b.n_) + ")");
  }

  int n_ = 0;
  std::uint64_t bits_ = 0;
};

using Family = std::vector<SubsetWord>;

/// A sign sequence P in {+,-}^t, 1 <= t <= 64. Sign i (0-based) is '+' iff bit i of the mask is set.
class Pattern {
 public:
  Pattern() = default;

  Pattern(int order, std::uint64_t plus_mask) : order_(order), plus_(plus_mask) {
    require(order >= 1 && order <= kMaxGround, Errc::InvalidArgument,
            "pattern order must lie in [1, 64], got " + std::to_string(order));
    require((plus_mask & ~low_mask(order)) == 0, Errc::InvalidArgument, "plus mask exceeds pattern order");
  }

  /// Parses a string over '+' and '-'.
  /// Signs '+' and '-'; the Unicode minus U+2212 is read as '-'.
  static Pattern parse(std::string_view raw) {
    std::string normalized;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw.substr(i, 3) == "\xE2\x88\x92") {
        normalized += '-';
        i += 2;
      } else {
        normalized += raw[i];
      }
    }
    std::string_view text = detail::trim(normalized);
    require(!text.empty(), Errc::ParseError, "empty pattern");
    require(text.size() <= kMaxGround, Errc::ParseError, "pattern longer than 64 signs");
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '+') {
        mask |= std::uint64_t{1} << i;
      } else {
        require(text[i] == '-', Errc::ParseError, "pattern sign must be '+' or '-', got '" +
                                                      std::string(1, text[i]) + "'");
      }
    }
    return Pattern(static_cast<int>(text.size()), mask);
  }

  int order() const noexcept { return order_; }
  std::uint64_t plus_mask() const noexcept { return plus_; }
  int s_plus() const noexcept { return std::popcount(plus_); }
  int s_minus() const noexcept { return order_ - s_plus(); }
  bool is_balanced() const noexcept { return s_plus() == s_minus(); }
  /// Half the order of a balanced pattern.
  int d() const {
    require(is_balanced(), Errc::UnbalancedPattern, "pattern " + to_string() + " is not balanced");
    return order_ / 2;
  }
  bool is_plus(int index) const noexcept { return (plus_ >> index) & 1; }

  /// c_l: (#plus - #minus) among the first l signs.
  int prefix_balance(int length) const noexcept {
    const int plus = std::popcount(plus_ & low_mask(length));
    return 2 * plus - length;
  }

  /// Signs [first, first + count).
  Pattern slice(int first, int count) const {
    require(first >= 0 && count >= 1 && first + count <= order_, Errc::InvalidArgument, "slice out of range");
    return Pattern(count, (plus_ >> first) & low_mask(count));
  }

  Pattern concat(const Pattern& tail) const {
    require(order_ + tail.order_ <= kMaxGround, Errc::InvalidArgument, "concatenation longer than 64");
    return Pattern(order_ + tail.order_, plus_ | (tail.plus_ << order_));
  }

  std::string to_string() const {
    std::string out(static_cast<std::size_t>(order_), '-');
    for (int i = 0; i < order_; ++i)
      if (is_plus(i)) out[static_cast<std::size_t>(i)] = '+';
    return out;
  }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend std::strong_ordering operator<=>(const Pattern& a, const Pattern& b) {
    if (auto c = a.order_ <=> b.order_; c != 0) return c;
    return a.to_string() <=> b.to_string();
  }

 private:
  int order_ = 0;
  std::uint64_t plus_ = 0;
};

inline Pattern negate(const Pattern& p) { return Pattern(p.order(), ~p.plus_mask() & low_mask(p.order())); }

inline Pattern reverse(const Pattern& p) {
  return Pattern(p.order(), detail::reverse_low_bits(p.plus_mask(), p.order()));
}

/// IP(d) = +^d -^d.
inline Pattern interval_pattern(int d) {
  require(d >= 1 && 2 * d <= kMaxGround, Errc::InvalidArgument, "interval pattern needs 1 <= d <= 32");
  return Pattern(2 * d, low_mask(d));
}

/// ALT(d) = (+-)^d.
inline Pattern alternating_pattern(int d) {
  require(d >= 1 && 2 * d <= kMaxGround, Errc::InvalidArgument, "alternating pattern needs 1 <= d <= 32");
  return Pattern(2 * d, 0x5555555555555555ULL & low_mask(2 * d));
}

/// Every d-balanced pattern, ordered by plus mask.
inline std::vector<Pattern> balanced_patterns(int d) {
  require(d >= 1 && 2 * d <= kMaxGround, Errc::InvalidArgument, "balanced_patterns needs 1 <= d <= 32");
  std::vector<Pattern> out;
  for (std::uint64_t m = low_mask(d); m != 0; m = next_same_popcount(m, 2 * d)) out.emplace_back(2 * d, m);
  return out;
}

/// pat(A, B): the sign pattern of the sorted symmetric difference, '+' where the element lies in A.
inline Pattern pat(const SubsetWord& a, const SubsetWord& b) {
  require(a.n() == b.n(), Errc::GroundMismatch, "pat on different ground sets");
  const std::uint64_t diff = a.bits() ^ b.bits();
  require(diff != 0, Errc::EmptyDifference, "pat(A, A) is undefined");
  return Pattern(std::popcount(diff), detail::extract_bits(a.bits(), diff));
}

/// True iff (a, b) or (b, a) forms `p`; skips the cost of building the pattern when orders differ.
inline bool forms_pattern_either_way(const SubsetWord& a, const SubsetWord& b, const Pattern& p) {
  const std::uint64_t diff = a.bits() ^ b.bits();
  if (std::popcount(diff) != p.order()) return false;
  const std::uint64_t mask = detail::extract_bits(a.bits(), diff);
  return mask == p.plus_mask() || (mask ^ low_mask(p.order())) == p.plus_mask();
}

/// First ordered pair (A, B) of the family with pat(A, B) = p, if any.
inline std::optional<std::pair<SubsetWord, SubsetWord>> find_pattern_pair(std::span<const SubsetWord> family,
                                                                          const Pattern& p) {
  if (family.empty()) return std::nullopt;
  const int n = family.front().n();
  for (const auto& s : family) require(s.n() == n, Errc::GroundMismatch, "family members on different ground sets");
  const std::uint64_t full = low_mask(p.order());
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const std::uint64_t diff = family[i].bits() ^ family[j].bits();
      if (diff == 0 || std::popcount(diff) != p.order()) continue;
      const std::uint64_t mask = detail::extract_bits(family[i].bits(), diff);
      if (mask == p.plus_mask()) return std::pair{family[i], family[j]};
      if ((mask ^ full) == p.plus_mask()) return std::pair{family[j], family[i]};
    }
  }
  return std::nullopt;
}

/// No ordered pair of distinct members forms `p`. O(|F|^2).
inline bool is_p_free(std::span<const SubsetWord> family, const Pattern& p) {
  return !find_pattern_pair(family, p).has_value();
}

}  // namespace patternlab

template <>
struct std::hash<patternlab::SubsetWord> {
  std::size_t operator()(const patternlab::SubsetWord& s) const noexcept {
    return std::hash<std::uint64_t>{}(s.bits() * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(s.n()));
  }
};

template <>
struct std::hash<patternlab::Pattern> {
  std::size_t operator()(const patternlab::Pattern& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.plus_mask() * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(p.order()));
  }
};
