#pragma once

// Brute-force reference implementations for the tests. Nothing here calls the
// library's pattern predicate or solver; sets are raw bit masks, patterns are
// strings over '+' and '-'.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

inline std::string pattern_of(std::uint64_t a, std::uint64_t b, int n) {
  std::string p;
  for (int i = 0; i < n; ++i) {
    const bool in_a = (a >> i) & 1;
    const bool in_b = (b >> i) & 1;
    if (in_a != in_b) p += in_a ? '+' : '-';
  }
  return p;
}

inline std::string flip(std::string p) {
  for (char& c : p) c = c == '+' ? '-' : '+';
  return p;
}

inline std::vector<std::uint64_t> layer(int n, int k) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if (std::popcount(s) == k) out.push_back(s);
  return out;
}

inline bool is_free(const std::vector<std::uint64_t>& family, int n, const std::string& p) {
  for (auto a : family)
    for (auto b : family)
      if (a != b && pattern_of(a, b, n) == p) return false;
  return true;
}

/// Largest P-free subfamily of C([n],k), trying every family. Layer size <= 24.
inline int max_free_family(int n, int k, const std::string& p) {
  const auto sets = layer(n, k);
  const auto v = sets.size();
  std::vector<std::uint32_t> adj(v, 0);
  const std::string q = flip(p);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j) {
      if (i == j) continue;
      const auto s = pattern_of(sets[i], sets[j], n);
      if (s == p || s == q) adj[i] |= 1u << j;
    }
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << v); ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    bool ok = true;
    for (std::uint32_t rest = mask; rest != 0 && ok; rest &= rest - 1)
      ok = (adj[static_cast<std::size_t>(std::countr_zero(rest))] & mask) == 0;
    if (ok) best = size;
  }
  return best;
}

/// Walks from a to b with steps +-1, levels kept in [lo, hi], by trying all 2^L step words.
inline std::uint64_t walks(int length, int a, int b, int lo, int hi) {
  std::uint64_t count = 0;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << length); ++w) {
    int level = a;
    bool ok = level >= lo && level <= hi;
    for (int i = 0; i < length && ok; ++i) {
      level += ((w >> i) & 1) ? 1 : -1;
      ok = level >= lo && level <= hi;
    }
    if (ok && level == b) ++count;
  }
  return count;
}

/// Walks from a to b that touch level h somewhere.
inline std::uint64_t walks_touching(int length, int a, int b, int h) {
  std::uint64_t count = 0;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << length); ++w) {
    int level = a;
    bool touched = level == h;
    for (int i = 0; i < length; ++i) {
      level += ((w >> i) & 1) ? 1 : -1;
      touched = touched || level == h;
    }
    if (touched && level == b) ++count;
  }
  return count;
}

/// Points of [m]^D as coordinate vectors, last coordinate fastest.
inline std::vector<std::vector<int>> grid(int m, int dim) {
  std::vector<std::vector<int>> out;
  std::vector<int> x(static_cast<std::size_t>(dim), 1);
  while (true) {
    out.push_back(x);
    int i = dim - 1;
    while (i >= 0 && x[static_cast<std::size_t>(i)] == m) x[static_cast<std::size_t>(i--)] = 1;
    if (i < 0) break;
    ++x[static_cast<std::size_t>(i)];
  }
  return out;
}

inline bool dominates(const std::vector<int>& x, const std::vector<int>& y, int d) {
  int differ = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] < x[i]) return false;
    if (y[i] != x[i]) ++differ;
  }
  return differ == d;
}

/// Largest d-domination-free subset of [m]^D over all subsets; m^D <= 20.
inline int max_domination_free(int m, int dim, int d) {
  const auto pts = grid(m, dim);
  const auto v = pts.size();
  std::vector<std::uint32_t> adj(v, 0);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j)
      if (dominates(pts[i], pts[j], d) || dominates(pts[j], pts[i], d)) adj[i] |= 1u << j;
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << v); ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    bool ok = true;
    for (std::uint32_t rest = mask; rest != 0 && ok; rest &= rest - 1)
      ok = (adj[static_cast<std::size_t>(std::countr_zero(rest))] & mask) == 0;
    if (ok) best = size;
  }
  return best;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace oracle
