#pragma once

// Exact maximum independent set search.
//
// The solver works component by component. Each component first gets a greedy
// lexicographic independent set and a greedy clique cover; when they meet the
// component is closed without search. Otherwise a bit-parallel branch and bound
// (maximum clique in the complement, colour-class bound) fixes the optimum. When
// the caller supplies a symmetry oracle, the first levels branch on orbits
// instead of vertices. A second pass then builds the canonical witness (the
// lexicographically smallest maximum independent set) vertex by vertex, asking
// the branch and bound whether each prefix still extends to an optimum.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include "patternlab/error.hpp"

namespace patternlab {

/// Undirected simple graph in compressed adjacency form.
class SparseGraph {
 public:
  SparseGraph() = default;

  /// `edges` as (u, v) pairs, u != v; duplicates are tolerated.
  SparseGraph(std::uint32_t vertex_count, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges)
      : offsets_(vertex_count + 1, 0) {
    std::vector<std::uint32_t> degree(vertex_count, 0);
    for (auto [u, v] : edges) {
      require(u < vertex_count && v < vertex_count && u != v, Errc::InvalidArgument, "bad edge");
      ++degree[u];
      ++degree[v];
    }
    for (std::uint32_t i = 0; i < vertex_count; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    neighbours_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges) {
      neighbours_[fill[u]++] = v;
      neighbours_[fill[v]++] = u;
    }
    for (std::uint32_t i = 0; i < vertex_count; ++i) {
      auto first = neighbours_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
      auto last = neighbours_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
      std::sort(first, last);
      degree[i] = static_cast<std::uint32_t>(std::unique(first, last) - first);
    }
    // Compact away duplicates.
    std::vector<std::uint32_t> packed;
    packed.reserve(neighbours_.size());
    std::vector<std::size_t> new_offsets(vertex_count + 1, 0);
    for (std::uint32_t i = 0; i < vertex_count; ++i) {
      packed.insert(packed.end(), neighbours_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                    neighbours_.begin() + static_cast<std::ptrdiff_t>(offsets_[i] + degree[i]));
      new_offsets[i + 1] = packed.size();
    }
    neighbours_ = std::move(packed);
    offsets_ = std::move(new_offsets);
  }

  std::uint32_t vertex_count() const noexcept {
    return offsets_.empty() ? 0 : static_cast<std::uint32_t>(offsets_.size() - 1);
  }
  std::size_t edge_count() const noexcept { return neighbours_.size() / 2; }
  std::span<const std::uint32_t> neighbours(std::uint32_t v) const {
    return {neighbours_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::uint32_t degree(std::uint32_t v) const { return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]); }
  bool adjacent(std::uint32_t u, std::uint32_t v) const {
    auto nb = neighbours(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> neighbours_;
};

struct SearchBudget {
  std::uint64_t max_nodes = 100'000'000;
  double max_seconds = 300.0;
  unsigned threads = 1;
  /// Components larger than this are not searched with dense bitsets.
  std::uint32_t dense_vertex_limit = 8192;
  /// Replace the search's witness by the lexicographically smallest maximum set.
  bool canonical_witness = true;
};

/// Automorphisms the search may exploit. `orbits` must partition `candidates`
/// into orbits of the pointwise stabiliser of `chosen` inside one fixed group of
/// automorphisms of the graph. Vertex ids are those of the graph being solved.
class SymmetryOracle {
 public:
  virtual ~SymmetryOracle() = default;
  virtual std::vector<std::vector<std::uint32_t>> orbits(std::span<const std::uint32_t> chosen,
                                                         std::span<const std::uint32_t> candidates) const = 0;
  /// Orbit branching stops below this many chosen vertices.
  virtual int max_depth() const { return 8; }
};

struct MisOutcome {
  std::vector<std::uint32_t> witness;  // sorted vertex indices
  std::size_t upper_bound = 0;         // certified; equals witness.size() when exact
  bool exact = false;
  bool canonical = false;  // witness is the lexicographically smallest maximum set
  std::uint64_t nodes = 0;
  double milliseconds = 0.0;
};

namespace detail {

class Clock {
 public:
  Clock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct BudgetExceeded {};
struct TargetReached {};

// Shared node/time accounting. Safe to use from several worker threads.
class BudgetMeter {
 public:
  BudgetMeter(const SearchBudget& budget, const Clock& clock) : budget_(budget), clock_(clock) {}

  void tick() {
    const auto n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n > budget_.max_nodes) {
      exhausted_.store(true, std::memory_order_relaxed);
      throw BudgetExceeded{};
    }
    if ((n & 0xFFF) == 0 && clock_.seconds() > budget_.max_seconds) exhausted_.store(true, std::memory_order_relaxed);
    if (exhausted_.load(std::memory_order_relaxed)) throw BudgetExceeded{};
  }
  std::uint64_t nodes() const { return nodes_.load(); }

 private:
  const SearchBudget& budget_;
  const Clock& clock_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> exhausted_{false};
};

// Dense adjacency over a relabelled vertex range [0, size).
class DenseGraph {
 public:
  DenseGraph(const SparseGraph& g, std::span<const std::uint32_t> vertices)
      : size_(static_cast<std::uint32_t>(vertices.size())), words_((size_ + 63) / 64), rows_(size_ * words_, 0) {
    std::vector<std::int64_t> local(g.vertex_count(), -1);
    for (std::uint32_t i = 0; i < size_; ++i) local[vertices[i]] = i;
    for (std::uint32_t i = 0; i < size_; ++i) {
      for (auto w : g.neighbours(vertices[i])) {
        const auto j = local[w];
        if (j >= 0) rows_[i * words_ + static_cast<std::size_t>(j) / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }

  std::uint32_t size() const { return size_; }
  std::size_t words() const { return words_; }
  const std::uint64_t* row(std::uint32_t v) const { return rows_.data() + static_cast<std::size_t>(v) * words_; }

 private:
  std::uint32_t size_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
};

inline int popcount_words(const std::uint64_t* s, std::size_t words) {
  int c = 0;
  for (std::size_t i = 0; i < words; ++i) c += std::popcount(s[i]);
  return c;
}

inline bool any_words(const std::uint64_t* s, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i)
    if (s[i]) return true;
  return false;
}

// Partition `set` greedily into cliques of the graph (colour classes of the
// complement). Vertices whose class index exceeds `floor` are appended to
// `order`/`colour` in class order; returns the number of classes.
inline int clique_cover(const DenseGraph& g, const std::uint64_t* set, int floor, std::uint64_t* scratch_u,
                        std::uint64_t* scratch_q, std::vector<std::uint32_t>& order, std::vector<int>& colour) {
  const std::size_t words = g.words();
  std::copy(set, set + words, scratch_u);
  order.clear();
  colour.clear();
  int k = 0;
  while (any_words(scratch_u, words)) {
    ++k;
    std::copy(scratch_u, scratch_u + words, scratch_q);
    for (std::size_t w = 0; w < words; ++w) {
      while (scratch_q[w]) {
        const int bit = std::countr_zero(scratch_q[w]);
        const auto v = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(bit));
        scratch_u[w] &= ~(std::uint64_t{1} << bit);
        // Keep only candidates adjacent to v so the class stays a clique.
        const std::uint64_t* adj = g.row(v);
        scratch_q[w] &= ~(std::uint64_t{1} << bit);
        for (std::size_t x = w; x < words; ++x) scratch_q[x] &= adj[x];
        if (k > floor) {
          order.push_back(v);
          colour.push_back(k);
        }
      }
    }
  }
  return k;
}

// Branch and bound for the optimum size on one component (maximum clique of the complement).
class OptimumSearch {
 public:
  OptimumSearch(const DenseGraph& g, BudgetMeter& meter, std::atomic<std::size_t>& shared_best)
      : g_(g), meter_(meter), best_(shared_best), words_(g.words()) {
    const std::size_t depth = g.size() + 2;
    sets_.assign(depth * words_, 0);
    scratch_.assign(2 * words_, 0);
    orders_.resize(depth);
    colours_.resize(depth);
  }

  // Root colouring; vertices are branched from the back of `order`.
  void colour_root(std::vector<std::uint32_t>& order, std::vector<int>& colour) {
    std::vector<std::uint64_t> all(words_, 0);
    for (std::uint32_t v = 0; v < g_.size(); ++v) all[v / 64] |= std::uint64_t{1} << (v % 64);
    clique_cover(g_, all.data(), 0, scratch_.data(), scratch_.data() + words_, order, colour);
  }

  // Explores the root branch at position `index` of the root order: cliques of the
  // complement containing order[index] and otherwise only earlier vertices.
  void root_branch(const std::vector<std::uint32_t>& order, std::size_t index) {
    std::uint64_t* p = level(0);
    std::fill(p, p + words_, 0);
    for (std::size_t i = 0; i < index; ++i) p[order[i] / 64] |= std::uint64_t{1} << (order[i] % 64);
    const auto v = order[index];
    current_.assign(1, v);
    std::uint64_t* next = level(1);
    const std::uint64_t* adj = g_.row(v);
    for (std::size_t w = 0; w < words_; ++w) next[w] = p[w] & ~adj[w];
    if (!any_words(next, words_)) {
      offer();
    } else {
      expand(1);
    }
  }

  // Whole search with orbit branching on the first levels. `global` maps local
  // vertices to the oracle's vertex ids.
  void run_orbital(const SymmetryOracle& oracle, std::span<const std::uint32_t> global) {
    oracle_ = &oracle;
    global_ = global;
    std::uint64_t* p = level(0);
    std::fill(p, p + words_, 0);
    for (std::uint32_t v = 0; v < g_.size(); ++v) p[v / 64] |= std::uint64_t{1} << (v % 64);
    current_.clear();
    orbital(0);
  }

  // True when the local vertex set `candidates` holds an independent set of
  // `target` vertices; `found` receives one such set.
  bool reaches(const std::uint64_t* candidates, std::size_t target, std::vector<std::uint32_t>& found) {
    if (target == 0) {
      found.clear();
      return true;
    }
    std::uint64_t* p = level(0);
    std::copy(candidates, candidates + words_, p);
    current_.clear();
    stop_at_ = target;
    best_.store(target - 1);
    try {
      expand(0);
    } catch (const TargetReached&) {
      stop_at_ = 0;
      found = best_set_;
      return true;
    }
    stop_at_ = 0;
    return false;
  }

  const std::vector<std::uint32_t>& best_set() const { return best_set_; }

 private:
  std::uint64_t* level(std::size_t depth) { return sets_.data() + depth * words_; }

  void offer() {
    std::size_t seen = best_.load();
    while (current_.size() > seen) {
      if (best_.compare_exchange_weak(seen, current_.size())) {
        best_set_ = current_;
        if (stop_at_ != 0 && current_.size() >= stop_at_) throw TargetReached{};
        return;
      }
    }
  }

  int cover_size(const std::uint64_t* p) {
    return clique_cover(g_, p, 1 << 30, scratch_.data(), scratch_.data() + words_, cover_order_, cover_colour_);
  }

  void orbital(std::size_t depth) {
    meter_.tick();
    std::uint64_t* p = level(depth);
    if (!any_words(p, words_)) {
      offer();
      return;
    }
    if (current_.size() + static_cast<std::size_t>(cover_size(p)) <= best_.load()) return;
    if (static_cast<int>(current_.size()) >= oracle_->max_depth()) {
      expand(depth);
      return;
    }
    std::vector<std::uint32_t> chosen;
    std::vector<std::uint32_t> candidates;
    std::map<std::uint32_t, std::uint32_t> local_of;
    for (auto v : current_) chosen.push_back(global_[v]);
    for (std::uint32_t v = 0; v < g_.size(); ++v) {
      if ((p[v / 64] >> (v % 64)) & 1) {
        candidates.push_back(global_[v]);
        local_of[global_[v]] = v;
      }
    }
    auto orbits = oracle_->orbits(chosen, candidates);
    if (orbits.size() == candidates.size()) {
      expand(depth);
      return;
    }
    // Large orbits first: excluding one removes the most candidates.
    std::stable_sort(orbits.begin(), orbits.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    for (const auto& orbit : orbits) {
      const auto v = local_of.at(orbit.front());
      current_.push_back(v);
      std::uint64_t* next = level(depth + 1);
      const std::uint64_t* adj = g_.row(v);
      for (std::size_t w = 0; w < words_; ++w) next[w] = p[w] & ~adj[w];
      next[v / 64] &= ~(std::uint64_t{1} << (v % 64));
      orbital(depth + 1);
      current_.pop_back();
      for (auto u : orbit) {
        const auto l = local_of.at(u);
        p[l / 64] &= ~(std::uint64_t{1} << (l % 64));
      }
      if (!any_words(p, words_)) return;
      if (current_.size() + static_cast<std::size_t>(cover_size(p)) <= best_.load()) return;
    }
  }

  void expand(std::size_t depth) {
    meter_.tick();
    std::uint64_t* p = level(depth);
    auto& order = orders_[depth];
    auto& colour = colours_[depth];
    const int floor = static_cast<int>(best_.load()) - static_cast<int>(current_.size());
    clique_cover(g_, p, std::max(floor, 0), scratch_.data(), scratch_.data() + words_, order, colour);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current_.size() + static_cast<std::size_t>(colour[i]) <= best_.load()) return;
      const auto v = order[i];
      current_.push_back(v);
      std::uint64_t* next = level(depth + 1);
      const std::uint64_t* adj = g_.row(v);
      bool any = false;
      for (std::size_t w = 0; w < words_; ++w) {
        next[w] = p[w] & ~adj[w];
        any |= next[w] != 0;
      }
      next[v / 64] &= ~(std::uint64_t{1} << (v % 64));
      any = any && any_words(next, words_);
      if (!any) {
        offer();
      } else {
        expand(depth + 1);
      }
      current_.pop_back();
      p[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    }
  }

  const DenseGraph& g_;
  BudgetMeter& meter_;
  std::atomic<std::size_t>& best_;
  std::size_t words_;
  std::vector<std::uint64_t> sets_;
  std::vector<std::uint64_t> scratch_;
  std::vector<std::vector<std::uint32_t>> orders_;
  std::vector<std::vector<int>> colours_;
  std::vector<std::uint32_t> current_;
  std::vector<std::uint32_t> best_set_;
  std::vector<std::uint32_t> cover_order_;
  std::vector<int> cover_colour_;
  std::size_t stop_at_ = 0;
  const SymmetryOracle* oracle_ = nullptr;
  std::span<const std::uint32_t> global_;
};

// Lexicographically smallest independent set of `target` vertices, built greedily:
// a vertex is kept when the remaining candidates still hold target - 1 more. Each
// question is answered by greedy completion first and by branch and bound otherwise.
class CanonicalBuilder {
 public:
  CanonicalBuilder(const DenseGraph& g, BudgetMeter& meter) : g_(g), meter_(meter), words_(g.words()) {}

  bool run(std::size_t target, std::vector<std::uint32_t>& out) {
    std::vector<std::uint64_t> p(words_, 0);
    for (std::uint32_t v = 0; v < g_.size(); ++v) p[v / 64] |= std::uint64_t{1} << (v % 64);
    std::vector<std::uint64_t> next(words_, 0);
    std::vector<std::uint32_t> completion;
    std::atomic<std::size_t> best{0};
    OptimumSearch search(g_, meter_, best);
    out.clear();
    std::size_t need = target;
    while (need > 0) {
      std::uint32_t v = 0;
      if (!first_of(p, v)) return false;
      meter_.tick();
      const std::uint64_t* adj = g_.row(v);
      for (std::size_t w = 0; w < words_; ++w) next[w] = p[w] & ~adj[w];
      next[v / 64] &= ~(std::uint64_t{1} << (v % 64));
      bool keep = greedy_size(next) + 1 >= need;
      if (!keep && static_cast<std::size_t>(popcount_words(next.data(), words_)) + 1 >= need)
        keep = search.reaches(next.data(), need - 1, completion);
      if (keep) {
        out.push_back(v);
        p = next;
        --need;
      } else {
        p[v / 64] &= ~(std::uint64_t{1} << (v % 64));
      }
    }
    return true;
  }

 private:
  bool first_of(const std::vector<std::uint64_t>& p, std::uint32_t& v) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if (p[w]) {
        v = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(p[w])));
        return true;
      }
    }
    return false;
  }

  std::size_t greedy_size(std::vector<std::uint64_t> p) const {
    std::size_t count = 0;
    std::uint32_t v = 0;
    while (first_of(p, v)) {
      ++count;
      const std::uint64_t* adj = g_.row(v);
      for (std::size_t w = 0; w < words_; ++w) p[w] &= ~adj[w];
      p[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    }
    return count;
  }

  const DenseGraph& g_;
  BudgetMeter& meter_;
  std::size_t words_;
};

// Greedy lexicographic independent set of the listed vertices (ascending).
inline std::vector<std::uint32_t> greedy_lex_set(const SparseGraph& g, std::span<const std::uint32_t> vertices,
                                                 std::vector<char>& blocked) {
  std::vector<std::uint32_t> out;
  for (auto v : vertices) {
    if (blocked[v]) continue;
    out.push_back(v);
    for (auto w : g.neighbours(v)) blocked[w] = 1;
  }
  for (auto v : vertices) {
    blocked[v] = 0;
    for (auto w : g.neighbours(v)) blocked[w] = 0;
  }
  return out;
}

// Number of classes of a greedy clique partition of the listed vertices (ascending).
// A vertex joins the first class all of whose members it is adjacent to.
inline std::size_t greedy_clique_partition(const SparseGraph& g, std::span<const std::uint32_t> vertices,
                                           std::vector<std::int64_t>& class_of) {
  std::vector<std::size_t> class_size;
  std::vector<std::size_t> hits;
  std::vector<std::size_t> touched;
  for (auto v : vertices) {
    touched.clear();
    for (auto w : g.neighbours(v)) {
      const auto c = class_of[w];
      if (c < 0) continue;
      if (hits.size() <= static_cast<std::size_t>(c)) hits.resize(static_cast<std::size_t>(c) + 1, 0);
      if (hits[static_cast<std::size_t>(c)]++ == 0) touched.push_back(static_cast<std::size_t>(c));
    }
    std::size_t chosen = class_size.size();
    for (auto c : touched)
      if (hits[c] == class_size[c]) chosen = std::min(chosen, c);
    for (auto c : touched) hits[c] = 0;
    if (chosen == class_size.size()) class_size.push_back(0);
    ++class_size[chosen];
    class_of[v] = static_cast<std::int64_t>(chosen);
  }
  for (auto v : vertices) class_of[v] = -1;
  return class_size.size();
}

inline std::vector<std::vector<std::uint32_t>> connected_components(const SparseGraph& g) {
  const auto n = g.vertex_count();
  std::vector<std::int64_t> comp(n, -1);
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    comp[s] = static_cast<std::int64_t>(out.size() - 1);
    stack.assign(1, s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (auto w : g.neighbours(v)) {
        if (comp[w] < 0) {
          comp[w] = comp[s];
          stack.push_back(w);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

struct ComponentResult {
  std::vector<std::uint32_t> witness;
  std::size_t upper_bound = 0;
  bool exact = false;
  bool canonical = false;
};

inline ComponentResult solve_component(const SparseGraph& g, const std::vector<std::uint32_t>& vertices,
                                       const SearchBudget& budget, BudgetMeter& meter, std::vector<char>& blocked,
                                       std::vector<std::int64_t>& class_of, const SymmetryOracle* symmetry) {
  ComponentResult res;
  res.witness = greedy_lex_set(g, vertices, blocked);
  res.upper_bound = greedy_clique_partition(g, vertices, class_of);
  if (res.witness.size() == res.upper_bound) {
    res.exact = res.canonical = true;
    return res;
  }
  if (vertices.size() > budget.dense_vertex_limit) return res;

  std::atomic<std::size_t> best{res.witness.size()};
  std::vector<std::uint32_t> best_local;
  const DenseGraph lex_graph(g, vertices);

  if (symmetry != nullptr) {
    // The oracle speaks in graph ids, so the component must be the whole graph.
    OptimumSearch search(lex_graph, meter, best);
    std::vector<std::uint32_t> order;
    std::vector<int> colour;
    search.colour_root(order, colour);
    res.upper_bound = std::min<std::size_t>(res.upper_bound, static_cast<std::size_t>(colour.back()));
    try {
      search.run_orbital(*symmetry, vertices);
    } catch (const BudgetExceeded&) {
      if (search.best_set().size() > res.witness.size()) {
        res.witness.clear();
        for (auto local : search.best_set()) res.witness.push_back(vertices[local]);
        std::sort(res.witness.begin(), res.witness.end());
      }
      return res;
    }
    best_local = search.best_set();
    if (best_local.size() > res.witness.size()) {
      res.witness.clear();
      for (auto local : best_local) res.witness.push_back(vertices[local]);
      std::sort(res.witness.begin(), res.witness.end());
    }
  } else {
    // Branch and bound on a degeneracy-style order of the complement: vertices of
    // small conflict degree (large complement degree) are coloured first.
    std::vector<std::uint32_t> by_degree(vertices.begin(), vertices.end());
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return g.degree(a) < g.degree(b); });
    DenseGraph dense(g, by_degree);
    std::vector<std::uint32_t> root_order;
    std::vector<int> root_colour;
    {
      OptimumSearch probe(dense, meter, best);
      probe.colour_root(root_order, root_colour);
    }
    res.upper_bound = std::min<std::size_t>(res.upper_bound, static_cast<std::size_t>(root_colour.back()));

    const unsigned threads = std::max(1u, budget.threads);
    std::atomic<std::int64_t> next_index{static_cast<std::int64_t>(root_order.size()) - 1};
    std::mutex merge;
    std::vector<std::int64_t> active(threads, -1);
    bool interrupted = false;

    auto worker = [&](unsigned id) {
      OptimumSearch search(dense, meter, best);
      try {
        for (;;) {
          const auto i = next_index.fetch_sub(1);
          if (i < 0) break;
          if (static_cast<std::size_t>(root_colour[static_cast<std::size_t>(i)]) <= best.load()) break;
          {
            std::lock_guard lock(merge);
            active[id] = i;
          }
          search.root_branch(root_order, static_cast<std::size_t>(i));
          std::lock_guard lock(merge);
          active[id] = -1;
        }
      } catch (const BudgetExceeded&) {
        std::lock_guard lock(merge);
        interrupted = true;
      }
      std::lock_guard lock(merge);
      if (search.best_set().size() > best_local.size()) best_local = search.best_set();
    };

    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }

    if (best_local.size() > res.witness.size()) {
      res.witness.clear();
      for (auto local : best_local) res.witness.push_back(by_degree[local]);
      std::sort(res.witness.begin(), res.witness.end());
    }
    if (interrupted) {
      // Every unexplored clique of the complement lies among root positions at or
      // below the largest interrupted or unclaimed one, whose colour bounds it.
      std::int64_t open = next_index.load();
      for (auto a : active) open = std::max(open, a);
      std::size_t bound = res.witness.size();
      if (open >= 0) bound = std::max(bound, static_cast<std::size_t>(root_colour[static_cast<std::size_t>(open)]));
      res.upper_bound = std::min(res.upper_bound, bound);
      if (res.upper_bound > res.witness.size()) return res;
    }
  }
  res.upper_bound = res.witness.size();
  res.exact = true;
  if (!budget.canonical_witness) return res;

  // Canonical witness at the now known optimum.
  CanonicalBuilder builder(lex_graph, meter);
  std::vector<std::uint32_t> lex_set;
  try {
    if (builder.run(res.witness.size(), lex_set)) {
      res.witness.clear();
      for (auto local : lex_set) res.witness.push_back(vertices[local]);
      res.canonical = true;
    }
  } catch (const BudgetExceeded&) {
    // Optimum is proven; only canonicity of the witness is lost.
  }
  return res;
}

}  // namespace detail

/// Maximum independent set of `g`. Never throws on budget exhaustion: the outcome
/// then carries the incumbent and a certified upper bound with `exact == false`.
/// `symmetry`, when given, describes automorphisms of `g`; it is used only when `g`
/// is connected.
inline MisOutcome maximum_independent_set(const SparseGraph& g, const SearchBudget& budget = {},
                                          const SymmetryOracle* symmetry = nullptr) {
  detail::Clock clock;
  detail::BudgetMeter meter(budget, clock);
  MisOutcome out;
  std::vector<char> blocked(g.vertex_count(), 0);
  std::vector<std::int64_t> class_of(g.vertex_count(), -1);
  out.exact = true;
  out.canonical = true;
  const auto components = detail::connected_components(g);
  if (components.size() != 1) symmetry = nullptr;
  for (const auto& comp : components) {
    if (comp.size() == 1) {
      out.witness.push_back(comp.front());
      ++out.upper_bound;
      continue;
    }
    detail::ComponentResult r;
    try {
      r = detail::solve_component(g, comp, budget, meter, blocked, class_of, symmetry);
    } catch (const detail::BudgetExceeded&) {
      // Raised before the component's search started; fall back to the greedy pair.
      r.witness = detail::greedy_lex_set(g, comp, blocked);
      r.upper_bound = detail::greedy_clique_partition(g, comp, class_of);
      r.exact = r.witness.size() == r.upper_bound;
      r.canonical = r.exact;
    }
    out.witness.insert(out.witness.end(), r.witness.begin(), r.witness.end());
    out.upper_bound += r.upper_bound;
    out.exact = out.exact && r.exact;
    out.canonical = out.canonical && r.canonical;
  }
  std::sort(out.witness.begin(), out.witness.end());
  out.nodes = meter.nodes();
  out.milliseconds = clock.seconds() * 1000.0;
  return out;
}

}  // namespace patternlab
