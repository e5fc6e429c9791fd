#pragma once

// Conflict graphs on a layer of the cube and exact extremal numbers f(n,k,P).

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "patternlab/combinatorics.hpp"
#include "patternlab/error.hpp"
#include "patternlab/mis.hpp"
#include "patternlab/patterns.hpp"

namespace patternlab {

inline constexpr std::uint64_t kDefaultVertexCap = 300'000;

/// All k-subsets of [n] in colex order.
inline Family layer(int n, int k) {
  require(n >= 1 && n <= kMaxGround && k >= 0 && k <= n, Errc::InvalidArgument, "layer needs 0 <= k <= n <= 64");
  Family out;
  out.reserve(static_cast<std::size_t>(binomial_u64(n, k)));
  if (k == 0) {
    out.push_back(SubsetWord::empty(n));
    return out;
  }
  for (std::uint64_t m = low_mask(k); m != 0; m = next_same_popcount(m, n)) out.emplace_back(n, m);
  return out;
}

/// Graph on the k-th layer whose edges join pairs forming P in either order.
/// A P-free subfamily of the layer is exactly an independent set.
class ConflictGraph {
 public:
  ConflictGraph(int n, int k, Pattern pattern, SparseGraph graph)
      : n_(n), k_(k), pattern_(pattern), graph_(std::move(graph)) {}

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  const Pattern& pattern() const noexcept { return pattern_; }
  std::uint32_t vertex_count() const noexcept { return graph_.vertex_count(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  const SparseGraph& graph() const noexcept { return graph_; }

  /// Vertex i is the i-th k-subset in colex order.
  SubsetWord vertex(std::uint32_t index) const {
    std::uint64_t bits = 0;
    std::uint64_t rank = index;
    for (int i = k_; i >= 1; --i) {
      int c = i - 1;
      while (binomial_u64(c + 1, i) <= rank) ++c;
      rank -= binomial_u64(c, i);
      bits |= std::uint64_t{1} << c;
    }
    return SubsetWord(n_, bits);
  }

  std::uint32_t index_of(const SubsetWord& s) const {
    require(s.n() == n_ && s.size() == k_, Errc::LayerMismatch, "set not on this layer");
    return static_cast<std::uint32_t>(colex_rank(s.bits()));
  }

  bool adjacent(std::uint32_t u, std::uint32_t v) const { return graph_.adjacent(u, v); }

 private:
  int n_;
  int k_;
  Pattern pattern_;
  SparseGraph graph_;
};

inline ConflictGraph build_conflict_graph(int n, int k, const Pattern& p,
                                          std::uint64_t vertex_cap = kDefaultVertexCap) {
  require(p.is_balanced(), Errc::UnbalancedPattern, "conflict graphs need a balanced pattern, got " + p.to_string());
  require(n >= 1 && n <= kMaxGround && k >= 0 && k <= n, Errc::InvalidArgument, "layer needs 0 <= k <= n <= 64");
  const std::uint64_t count = binomial_u64(n, k);
  require(count <= vertex_cap, Errc::LayerTooLarge,
          "C(" + std::to_string(n) + "," + std::to_string(k) + ") = " + std::to_string(count) +
              " exceeds the vertex cap " + std::to_string(vertex_cap));
  const int d = p.d();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  if (d <= k && d <= n - k) {
    const Pattern neg = negate(p);
    const std::uint64_t ground = low_mask(n);
    std::uint32_t index = 0;
    for (const auto& a : layer(n, k)) {
      const std::uint64_t outside = ground & ~a.bits();
      // Replace a d-subset of A by a d-subset of its complement.
      for (std::uint64_t r = low_mask(d); r != 0; r = next_same_popcount(r, k)) {
        const std::uint64_t removed = detail::deposit_bits(r, a.bits());
        for (std::uint64_t s = low_mask(d); s != 0; s = next_same_popcount(s, n - k)) {
          const std::uint64_t added = detail::deposit_bits(s, outside);
          const std::uint64_t b = (a.bits() & ~removed) | added;
          const auto other = static_cast<std::uint32_t>(colex_rank(b));
          if (other <= index) continue;
          const std::uint64_t mask = detail::extract_bits(a.bits(), removed | added);
          if (mask == p.plus_mask() || mask == neg.plus_mask()) edges.emplace_back(index, other);
        }
      }
      ++index;
    }
  }
  return ConflictGraph(n, k, p, SparseGraph(static_cast<std::uint32_t>(count), edges));
}

/// For d = 1 the conflict graph joins all pairs at symmetric difference 2, so every
/// permutation of [n] is an automorphism. The pointwise stabiliser of chosen sets
/// permutes each Venn atom of those sets freely; a candidate's orbit is fixed by how
/// many elements it takes from each atom.
class LayerPermutationSymmetry : public SymmetryOracle {
 public:
  LayerPermutationSymmetry(int n, int k, int max_depth = 8) : max_depth_(max_depth) {
    for (const auto& a : layer(n, k)) sets_.push_back(a.bits());
    n_ = n;
  }

  std::vector<std::vector<std::uint32_t>> orbits(std::span<const std::uint32_t> chosen,
                                                 std::span<const std::uint32_t> candidates) const override {
    require(chosen.size() <= 64, Errc::InvalidArgument, "too many chosen sets for atom signatures");
    std::map<std::uint64_t, std::uint64_t> atoms;  // signature -> elements
    for (int e = 0; e < n_; ++e) {
      std::uint64_t signature = 0;
      for (std::size_t j = 0; j < chosen.size(); ++j)
        if ((sets_[chosen[j]] >> e) & 1) signature |= std::uint64_t{1} << j;
      atoms[signature] |= std::uint64_t{1} << e;
    }
    std::map<std::vector<std::uint8_t>, std::size_t> index;
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint8_t> profile;
    for (auto c : candidates) {
      profile.clear();
      for (const auto& [signature, elements] : atoms)
        profile.push_back(static_cast<std::uint8_t>(std::popcount(sets_[c] & elements)));
      auto [it, fresh] = index.try_emplace(profile, out.size());
      if (fresh) out.emplace_back();
      out[it->second].push_back(c);
    }
    return out;
  }

  int max_depth() const override { return max_depth_; }

 private:
  int n_ = 0;
  int max_depth_;
  std::vector<std::uint64_t> sets_;
};

struct ExtremalResult {
  int n = 0;
  int k = 0;
  Pattern pattern;
  std::uint64_t f = 0;  // best size found; the optimum when `exact`
  Family witness;
  std::uint64_t upper_bound = 0;  // certified
  bool exact = false;
  bool canonical_witness = false;
  std::uint64_t nodes = 0;
  double milliseconds = 0.0;

  Rational density() const { return make_rational(f, binomial(n, k)); }

  friend bool operator==(const ExtremalResult&, const ExtremalResult&) = default;
};

/// Carries the incumbent and certified dual bound of an interrupted search.
class BudgetExhausted : public Error {
 public:
  explicit BudgetExhausted(ExtremalResult partial)
      : Error(Errc::BudgetExhausted, "f(" + std::to_string(partial.n) + "," + std::to_string(partial.k) + "," +
                                         partial.pattern.to_string() + ") in [" + std::to_string(partial.f) + ", " +
                                         std::to_string(partial.upper_bound) + "]"),
        partial_(std::move(partial)) {}

  const ExtremalResult& partial() const noexcept { return partial_; }

 private:
  ExtremalResult partial_;
};

/// Exact maximum P-free subfamily of the graph's layer. Throws BudgetExhausted when the
/// search cannot close within the budget.
inline ExtremalResult max_independent_set(const ConflictGraph& g, const SearchBudget& budget = {}) {
  std::optional<LayerPermutationSymmetry> symmetry;
  if (g.pattern().order() == 2) symmetry.emplace(g.n(), g.k());
  const MisOutcome out = maximum_independent_set(g.graph(), budget, symmetry ? &*symmetry : nullptr);
  ExtremalResult res;
  res.n = g.n();
  res.k = g.k();
  res.pattern = g.pattern();
  res.f = out.witness.size();
  res.upper_bound = out.upper_bound;
  res.exact = out.exact;
  res.canonical_witness = out.canonical;
  res.nodes = out.nodes;
  res.milliseconds = out.milliseconds;
  res.witness.reserve(out.witness.size());
  for (auto v : out.witness) res.witness.push_back(g.vertex(v));
  require(is_p_free(res.witness, res.pattern), Errc::FreenessViolated, "solver witness is not P-free");
  if (!res.exact) throw BudgetExhausted(std::move(res));
  return res;
}

inline ExtremalResult extremal_number(int n, int k, const Pattern& p, const SearchBudget& budget = {},
                                      std::uint64_t vertex_cap = kDefaultVertexCap) {
  return max_independent_set(build_conflict_graph(n, k, p, vertex_cap), budget);
}

/// delta(n,k,P) = f(n,k,P) / C(n,k), exact.
inline Rational extremal_density(int n, int k, const Pattern& p, const SearchBudget& budget = {},
                                 std::uint64_t vertex_cap = kDefaultVertexCap) {
  return extremal_number(n, k, p, budget, vertex_cap).density();
}

/// Unordered pairs of members at symmetric difference exactly 2.
inline std::uint64_t count_distance2_pairs(std::span<const SubsetWord> family) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      require(family[i].n() == family[j].n(), Errc::GroundMismatch, "family members on different ground sets");
      if (std::popcount(family[i].bits() ^ family[j].bits()) == 2) ++count;
    }
  }
  return count;
}

/// Same count by the superset double count: sum over (k+1)-sets C of C(y_C, 2),
/// y_C = number of members contained in C. Requires a uniform family.
inline std::uint64_t count_distance2_pairs_by_supersets(std::span<const SubsetWord> family) {
  if (family.empty()) return 0;
  const int n = family.front().n();
  const int k = family.front().size();
  std::unordered_map<std::uint64_t, std::uint64_t> y;
  for (const auto& a : family) {
    require(a.n() == n, Errc::GroundMismatch, "family members on different ground sets");
    require(a.size() == k, Errc::LayerMismatch, "superset double count needs a uniform family");
    for (std::uint64_t out = low_mask(n) & ~a.bits(); out != 0; out &= out - 1) ++y[a.bits() | (out & -out)];
  }
  std::uint64_t total = 0;
  for (const auto& [c, count] : y) total += count * (count - 1) / 2;
  return total;
}

}  // namespace patternlab
