#pragma once

// Grid domination, combinatorial lines and the (T, B, x) decomposition that turns
// domination in [m]^T into ALT(d) patterns between sets.

#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "patternlab/combinatorics.hpp"
#include "patternlab/error.hpp"
#include "patternlab/mis.hpp"
#include "patternlab/patterns.hpp"

namespace patternlab {

/// Point of [m]^D with 1-indexed coordinate values.
struct GridVector {
  int m = 0;
  std::vector<int> coords;

  GridVector() = default;
  GridVector(int alphabet, std::vector<int> values) : m(alphabet), coords(std::move(values)) {
    require(m >= 1, Errc::InvalidArgument, "grid alphabet must have m >= 1");
    for (int c : coords)
      require(c >= 1 && c <= m, Errc::InvalidArgument,
              "grid coordinate " + std::to_string(c) + " outside [1," + std::to_string(m) + "]");
  }

  int dimension() const noexcept { return static_cast<int>(coords.size()); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(coords[i]);
    }
    return out;
  }

  /// Comma-separated coordinates, e.g. "1,3,2".
  static GridVector parse(std::string_view text, int m) {
    std::vector<int> values;
    const auto body = detail::trim(text);
    std::size_t pos = 0;
    while (pos < body.size()) {
      auto comma = body.find(',', pos);
      if (comma == std::string_view::npos) comma = body.size();
      const auto field = detail::trim(body.substr(pos, comma - pos));
      try {
        std::size_t used = 0;
        values.push_back(std::stoi(std::string(field), &used));
        require(used == field.size(), Errc::ParseError, "bad grid coordinate '" + std::string(field) + "'");
      } catch (const std::logic_error&) {
        fail(Errc::ParseError, "bad grid coordinate '" + std::string(field) + "'");
      }
      pos = comma + 1;
    }
    return GridVector(m, std::move(values));
  }

  friend bool operator==(const GridVector&, const GridVector&) = default;
};

namespace detail {

inline void check_same_shape(const GridVector& x, const GridVector& y) {
  require(x.m == y.m && x.coords.size() == y.coords.size(), Errc::ShapeMismatch,
          "grid vectors of shapes [" + std::to_string(x.m) + "]^" + std::to_string(x.dimension()) + " and [" +
              std::to_string(y.m) + "]^" + std::to_string(y.dimension()));
}

// Grid points are numbered in lexicographic order, coordinate 1 most significant.
inline GridVector grid_point(int m, int dim, std::uint64_t index) {
  std::vector<int> coords(static_cast<std::size_t>(dim));
  for (int i = dim - 1; i >= 0; --i) {
    coords[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::uint64_t>(m)) + 1;
    index /= static_cast<std::uint64_t>(m);
  }
  return GridVector(m, std::move(coords));
}

}  // namespace detail

/// y d-dominates x: exactly d coordinates differ and y >= x coordinatewise.
inline bool d_dominates(const GridVector& x, const GridVector& y, int d) {
  detail::check_same_shape(x, y);
  int differ = 0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (x.coords[i] > y.coords[i]) return false;
    if (x.coords[i] != y.coords[i]) ++differ;
  }
  return differ == d;
}

inline constexpr std::uint64_t kDefaultGridCap = 59049;  // 3^10

struct DominationResult {
  int m = 0;
  int dimension = 0;
  int d = 0;
  std::uint64_t size = 0;
  std::uint64_t upper_bound = 0;
  bool exact = false;
  std::vector<GridVector> witness;  // lexicographic order
  bool lemma_applies = false;       // 2 m d^2 <= D
  BigInt lemma_bound;               // 2 m^{D-1}
  std::uint64_t nodes = 0;
};

/// Largest subset of [m]^D with no pair where one point d-dominates the other.
/// d = 1 is settled by an explicit certificate, larger d by exact search.
inline DominationResult domination_free_max(int m, int dim, int d, const SearchBudget& budget = {},
                                            std::uint64_t cap = kDefaultGridCap) {
  require(m >= 1 && dim >= 1 && d >= 1, Errc::InvalidArgument, "domination_free_max needs m, D, d >= 1");
  BigInt points = 1;
  for (int i = 0; i < dim; ++i) points *= m;
  require(points <= cap, Errc::GridTooLarge,
          std::to_string(m) + "^" + std::to_string(dim) + " = " + points.str() + " exceeds the grid cap " +
              std::to_string(cap));
  const auto count = points.convert_to<std::uint64_t>();
  DominationResult res;
  res.m = m;
  res.dimension = dim;
  res.d = d;
  res.lemma_applies = 2 * m * d * d <= dim;
  res.lemma_bound = 2;
  for (int i = 1; i < dim; ++i) res.lemma_bound *= m;

  if (d == 1) {
    // The m^{D-1} lines along the last coordinate are cliques and partition the grid;
    // the points with coordinate sum 0 mod m meet each line once and are pairwise
    // non-dominating, since raising one coordinate by less than m changes the sum.
    for (std::uint64_t x = 0; x < count; ++x) {
      auto point = detail::grid_point(m, dim, x);
      int sum = 0;
      for (int c : point.coords) sum += c - 1;
      if (sum % m == 0) res.witness.push_back(std::move(point));
    }
    res.size = res.upper_bound = res.witness.size();
    res.exact = true;
    return res;
  }

  std::vector<std::uint64_t> weight(static_cast<std::size_t>(dim), 1);  // place value of each coordinate
  for (int i = dim - 2; i >= 0; --i)
    weight[static_cast<std::size_t>(i)] = weight[static_cast<std::size_t>(i) + 1] * static_cast<std::uint64_t>(m);

  // Raise d coordinates of x, each to some larger value.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<int> coords;
  auto raise = [&](auto&& self, std::uint64_t from, std::uint64_t to, int next, int left) -> void {
    if (left == 0) {
      edges.emplace_back(static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to));
      return;
    }
    for (int i = next; i <= dim - left; ++i) {
      const int c = coords[static_cast<std::size_t>(i)];
      for (int v = c + 1; v <= m; ++v)
        self(self, from, to + static_cast<std::uint64_t>(v - c) * weight[static_cast<std::size_t>(i)], i + 1, left - 1);
    }
  };
  if (d <= dim) {
    for (std::uint64_t x = 0; x < count; ++x) {
      coords = detail::grid_point(m, dim, x).coords;
      raise(raise, x, x, 0, d);
    }
  }

  const SparseGraph graph(static_cast<std::uint32_t>(count), edges);
  const MisOutcome out = maximum_independent_set(graph, budget);
  res.size = out.witness.size();
  res.upper_bound = out.upper_bound;
  res.exact = out.exact;
  res.nodes = out.nodes;
  for (auto v : out.witness) res.witness.push_back(detail::grid_point(m, dim, v));
  return res;
}

/// The m points that agree with z off S and take one common value on S. S holds
/// 1-indexed coordinates; z's values on S are ignored.
inline std::vector<GridVector> combinatorial_line(std::span<const int> s, const GridVector& z) {
  require(!s.empty(), Errc::InvalidArgument, "a combinatorial line needs |S| >= 1");
  for (int i : s)
    require(i >= 1 && i <= z.dimension(), Errc::InvalidArgument, "line coordinate " + std::to_string(i) + " out of range");
  std::vector<GridVector> line;
  for (int value = 1; value <= z.m; ++value) {
    auto coords = z.coords;
    for (int i : s) coords[static_cast<std::size_t>(i) - 1] = value;
    line.emplace_back(z.m, std::move(coords));
  }
  return line;
}

/// Probability that v lies on a uniformly random line with |S| = d:
/// sum_i C(k_i, d) / (m^{D-d} C(D, d)), k_i = number of coordinates equal to i.
inline Rational line_membership_probability(const GridVector& v, int d) {
  require(d >= 1 && d <= v.dimension(), Errc::InvalidArgument, "line size must lie in [1, D]");
  std::vector<int> k(static_cast<std::size_t>(v.m) + 1, 0);
  for (int c : v.coords) ++k[static_cast<std::size_t>(c)];
  BigInt hits = 0;
  for (int i = 1; i <= v.m; ++i) hits += binomial(k[static_cast<std::size_t>(i)], d);
  BigInt lines = binomial(v.dimension(), d);
  for (int i = 0; i < v.dimension() - d; ++i) lines *= v.m;
  return Rational(hits, lines);
}

/// A = B(x): intervals I_i = [(i-1)m + 1, im]; T lists the intervals A meets in
/// exactly one element, x the position of that element, B the rest of A.
struct AltDecomposition {
  int n = 0;
  int m = 0;
  std::vector<int> t;  // 1-indexed interval numbers, ascending
  SubsetWord b;
  GridVector x;

  int intervals() const noexcept { return n / m; }
};

namespace detail {

inline void check_divisible(int n, int m) {
  require(m >= 1, Errc::InvalidArgument, "interval length must be >= 1");
  require(n % m == 0, Errc::IndivisibleGround, std::to_string(m) + " does not divide " + std::to_string(n));
}

inline std::uint64_t interval_mask(int m, int i) { return low_mask(m) << ((i - 1) * m); }

}  // namespace detail

inline AltDecomposition alt_decompose(const SubsetWord& a, int m) {
  detail::check_divisible(a.n(), m);
  AltDecomposition dec;
  dec.n = a.n();
  dec.m = m;
  std::uint64_t rest = a.bits();
  std::vector<int> positions;
  for (int i = 1; i <= a.n() / m; ++i) {
    const std::uint64_t hit = a.bits() & detail::interval_mask(m, i);
    if (std::popcount(hit) == 1) {
      dec.t.push_back(i);
      positions.push_back(std::countr_zero(hit) - (i - 1) * m + 1);
      rest &= ~hit;
    }
  }
  dec.b = SubsetWord(a.n(), rest);
  dec.x = GridVector(m, std::move(positions));
  return dec;
}

/// B(x) = B cup {(i-1)m + x_i : i in T}, 1-indexed.
inline SubsetWord alt_compose(int n, int m, std::span<const int> t, const SubsetWord& b, const GridVector& x) {
  detail::check_divisible(n, m);
  require(b.n() == n, Errc::GroundMismatch, "B lives on a different ground set");
  require(x.m == m && x.coords.size() == t.size(), Errc::ShapeMismatch, "x must be a point of [m]^T");
  std::vector<char> in_t(static_cast<std::size_t>(n / m) + 1, 0);
  for (int i : t) {
    require(i >= 1 && i <= n / m, Errc::InvalidArgument, "interval " + std::to_string(i) + " out of range");
    in_t[static_cast<std::size_t>(i)] = 1;
  }
  std::uint64_t bits = b.bits();
  for (int i = 1; i <= n / m; ++i) {
    const int hit = std::popcount(b.bits() & detail::interval_mask(m, i));
    if (in_t[static_cast<std::size_t>(i)]) {
      require(hit == 0, Errc::InvalidArgument, "B meets interval " + std::to_string(i) + " of T");
    } else {
      require(hit != 1, Errc::InvalidArgument, "B meets interval " + std::to_string(i) + " in a single element");
    }
  }
  for (std::size_t j = 0; j < t.size(); ++j)
    bits |= std::uint64_t{1} << ((t[j] - 1) * m + x.coords[j] - 1);
  return SubsetWord(n, bits);
}

inline SubsetWord alt_compose(const AltDecomposition& dec) { return alt_compose(dec.n, dec.m, dec.t, dec.b, dec.x); }

/// Checks that pat(B(x), B(y)) = ALT(d) for y d-dominating x over the intervals of dec.
inline bool domination_implies_alt(const AltDecomposition& dec, const GridVector& x, const GridVector& y, int d) {
  require(d_dominates(x, y, d), Errc::NotDominating, "(" + y.to_string() + ") does not " + std::to_string(d) +
                                                         "-dominate (" + x.to_string() + ")");
  const SubsetWord bx = alt_compose(dec.n, dec.m, dec.t, dec.b, x);
  const SubsetWord by = alt_compose(dec.n, dec.m, dec.t, dec.b, y);
  return pat(bx, by) == alternating_pattern(d);
}

/// Sum over all valid (T, B) of m^{|T|}; equals 2^n when decomposition is a bijection.
/// Enumerates B; the intervals B misses may each join T or not.
inline BigInt decomposition_weight_sum(int n, int m) {
  detail::check_divisible(n, m);
  require(n <= 30, Errc::InvalidArgument, "decomposition_weight_sum enumerates 2^n sets; n <= 30");
  BigInt total = 0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    int empty = 0;
    bool valid = true;
    for (int i = 1; i <= n / m && valid; ++i) {
      const int hit = std::popcount(b & detail::interval_mask(m, i));
      if (hit == 1) valid = false;
      if (hit == 0) ++empty;
    }
    if (!valid) continue;
    BigInt term = 1;
    for (int j = 0; j < empty; ++j) term *= (m + 1);
    total += term;
  }
  return total;
}

/// Bad set: |T(A)| <= m K / 2^{m+1}, K = n/m.
inline bool bad_set_indicator(const SubsetWord& a, int m) {
  detail::check_divisible(a.n(), m);
  const auto t = static_cast<std::int64_t>(alt_decompose(a, m).t.size());
  const BigInt lhs = BigInt(t) << (m + 1);
  return lhs <= BigInt(m) * (a.n() / m);
}

/// Exact number of bad subsets of [n]: sum over t of C(K,t) m^t (2^m - m)^{K-t}.
inline BigInt bad_set_count(int n, int m) {
  detail::check_divisible(n, m);
  const int k = n / m;
  BigInt total = 0;
  const BigInt other = (BigInt(1) << m) - m;
  for (int t = 0; t <= k; ++t) {
    if ((BigInt(t) << (m + 1)) > BigInt(m) * k) break;
    BigInt term = binomial(k, t);
    for (int j = 0; j < t; ++j) term *= m;
    for (int j = t; j < k; ++j) term *= other;
    total += term;
  }
  return total;
}

inline Rational bad_set_fraction(int n, int m) { return Rational(bad_set_count(n, m), BigInt(1) << n); }

/// The tail estimate e^{-n / 2^{m+1}} as stated for bad sets.
inline long double bad_set_stated_bound(int n, int m) { return std::exp(-static_cast<long double>(n) / std::ldexp(1.0L, m + 1)); }

/// Multiplicative Chernoff P(X <= mu/2) <= e^{-mu/8} with mu = K m / 2^m, i.e. e^{-n / 2^{m+3}}.
inline long double bad_set_chernoff_bound(int n, int m) {
  return std::exp(-static_cast<long double>(n) / std::ldexp(1.0L, m + 3));
}

}  // namespace patternlab
