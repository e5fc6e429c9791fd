#pragma once

// Explicit pattern-free families: parity classes, transversals, element-sum
// residues and windows, bounded-discrepancy (walk) families and C_{T,S}.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "patternlab/combinatorics.hpp"
#include "patternlab/error.hpp"
#include "patternlab/extremal.hpp"
#include "patternlab/patterns.hpp"
#include "patternlab/walks.hpp"

namespace patternlab {

inline constexpr std::uint64_t kDefaultMaterializationCap = std::uint64_t{1} << 24;

/// S(A) = sum of the elements of A.
inline std::int64_t element_sum(const SubsetWord& a) {
  std::int64_t s = 0;
  for (std::uint64_t b = a.bits(); b != 0; b &= b - 1) s += std::countr_zero(b) + 1;
  return s;
}

enum class FamilyKind { Parity, Transversal, SumResidue, SumWindow, BoundedDiscrepancy, CTS };

constexpr std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Parity: return "Parity";
    case FamilyKind::Transversal: return "Transversal";
    case FamilyKind::SumResidue: return "SumResidue";
    case FamilyKind::SumWindow: return "SumWindow";
    case FamilyKind::BoundedDiscrepancy: return "BoundedDiscrepancy";
    case FamilyKind::CTS: return "CTS";
  }
  return "Unknown";
}

namespace detail {

// counts[s][r]: number of (size)-subsets of [n] with element sum s, for the given size.
inline std::vector<std::uint64_t> layer_sum_distribution(int n, int size) {
  const int max_sum = n * (n + 1) / 2;
  // table[j][s] over elements processed so far; j = chosen count.
  std::vector<std::vector<std::uint64_t>> table(static_cast<std::size_t>(size) + 1,
                                                std::vector<std::uint64_t>(static_cast<std::size_t>(max_sum) + 1, 0));
  table[0][0] = 1;
  for (int e = 1; e <= n; ++e) {
    for (int j = std::min(size, e); j >= 1; --j) {
      auto& row = table[static_cast<std::size_t>(j)];
      const auto& prev = table[static_cast<std::size_t>(j) - 1];
      for (int s = max_sum; s >= e; --s) row[static_cast<std::size_t>(s)] += prev[static_cast<std::size_t>(s - e)];
    }
  }
  return table[static_cast<std::size_t>(size)];
}

// Largest walk level allowed by the strict bound |level| < d/4.
constexpr int discrepancy_level(int d) { return (d + 3) / 4 - 1; }

}  // namespace detail

/// Parameters of one explicit family together with its membership test and exact size.
class FamilySpec {
 public:
  /// B_1 (variant 1): |A| mod 2m in [0, m-1]; B_2 (variant 2): |A| mod 2m in [m, 2m-1].
  static FamilySpec parity(int n, int m, int variant) {
    check_ground(n);
    require(m >= 1, Errc::InvalidArgument, "parity family needs m >= 1");
    require(variant == 1 || variant == 2, Errc::InvalidArgument, "parity variant must be 1 or 2");
    FamilySpec f(FamilyKind::Parity, n);
    f.m_ = m;
    f.variant_ = variant;
    return f;
  }

  /// k-sets with exactly one element in each block of n/k consecutive elements.
  static FamilySpec transversal(int n, int k) {
    check_ground(n);
    require(k >= 1 && k <= n, Errc::InvalidArgument, "transversal family needs 1 <= k <= n");
    require(n % k == 0, Errc::IndivisibleBlocks, std::to_string(k) + " does not divide " + std::to_string(n));
    FamilySpec f(FamilyKind::Transversal, n);
    f.k_ = k;
    return f;
  }

  /// Middle-layer sets with S(A) = residue (mod n d).
  static FamilySpec sum_residue(int n, int d, std::int64_t residue) {
    check_even(n);
    require(d >= 1, Errc::InvalidArgument, "sum residue family needs d >= 1");
    require(residue >= 0 && residue < static_cast<std::int64_t>(n) * d, Errc::InvalidArgument,
            "residue must lie in [0, n d)");
    FamilySpec f(FamilyKind::SumResidue, n);
    f.k_ = n / 2;
    f.d_ = d;
    f.residue_ = residue;
    return f;
  }

  /// Middle-layer sets with S(A) in [center - d^2/2, center + d^2/2). d = 0 gives the empty window.
  static FamilySpec sum_window(int n, int d, std::int64_t center) {
    check_even(n);
    require(d >= 0, Errc::InvalidArgument, "sum window family needs d >= 0");
    FamilySpec f(FamilyKind::SumWindow, n);
    f.k_ = n / 2;
    f.d_ = d;
    f.center_ = center;
    return f;
  }

  /// Middle-layer sets whose walk W_i = 2|A cap [i]| - i keeps |W_i| < d/4 for every prefix.
  static FamilySpec bounded_discrepancy(int n, int d) {
    check_even(n);
    require(d >= 1, Errc::InvalidArgument, "bounded discrepancy family needs d >= 1");
    FamilySpec f(FamilyKind::BoundedDiscrepancy, n);
    f.k_ = n / 2;
    f.d_ = d;
    return f;
  }

  /// C_{T,S} = { S cup U : U a floor(k/2)-subset of T }, k = |T|.
  static FamilySpec cts(const SubsetWord& s, const SubsetWord& t) {
    require(s.n() == t.n(), Errc::GroundMismatch, "S and T on different ground sets");
    require(s.is_disjoint_from(t), Errc::OverlappingSupports, "S and T must be disjoint");
    require(t.size() >= 1, Errc::InvalidArgument, "C_{T,S} needs |T| >= 1");
    FamilySpec f(FamilyKind::CTS, s.n());
    f.s_ = s;
    f.t_ = t;
    f.k_ = s.size() + t.size() / 2;
    return f;
  }

  FamilyKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  /// Layer of a uniform family; -1 for the non-uniform parity families.
  int layer() const noexcept { return k_; }
  int d() const noexcept { return d_; }
  std::uint64_t materialization_cap() const noexcept { return cap_; }
  FamilySpec& with_cap(std::uint64_t cap) {
    cap_ = cap;
    return *this;
  }

  bool contains(const SubsetWord& a) const {
    if (a.n() != n_) return false;
    switch (kind_) {
      case FamilyKind::Parity: {
        const int r = a.size() % (2 * m_);
        return variant_ == 1 ? r < m_ : r >= m_;
      }
      case FamilyKind::Transversal: {
        const int block = n_ / k_;
        for (int j = 0; j < k_; ++j)
          if (std::popcount((a.bits() >> (j * block)) & low_mask(block)) != 1) return false;
        return true;
      }
      case FamilyKind::SumResidue:
        return a.size() == k_ && element_sum(a) % (static_cast<std::int64_t>(n_) * d_) == residue_;
      case FamilyKind::SumWindow: {
        if (a.size() != k_) return false;
        const std::int64_t twice = 2 * element_sum(a);
        const std::int64_t width = static_cast<std::int64_t>(d_) * d_;
        return twice >= 2 * center_ - width && twice < 2 * center_ + width;
      }
      case FamilyKind::BoundedDiscrepancy: {
        if (a.size() != k_) return false;
        const int limit = detail::discrepancy_level(d_);
        int level = 0;
        for (int i = 0; i < n_; ++i) {
          level += ((a.bits() >> i) & 1) ? 1 : -1;
          if (level > limit || level < -limit) return false;
        }
        return true;
      }
      case FamilyKind::CTS:
        return s_.is_subset_of(a) && (a - s_).is_subset_of(t_) && (a - s_).size() == t_.size() / 2;
    }
    return false;
  }

  /// Exact size, computed without listing the family.
  BigInt count() const {
    switch (kind_) {
      case FamilyKind::Parity: {
        BigInt total = 0;
        for (int s = 0; s <= n_; ++s)
          if (contains_size(s)) total += binomial(n_, s);
        return total;
      }
      case FamilyKind::Transversal: {
        BigInt total = 1;
        for (int j = 0; j < k_; ++j) total *= n_ / k_;
        return total;
      }
      case FamilyKind::SumResidue: {
        const auto dist = detail::layer_sum_distribution(n_, k_);
        const std::int64_t mod = static_cast<std::int64_t>(n_) * d_;
        BigInt total = 0;
        for (std::size_t s = 0; s < dist.size(); ++s)
          if (static_cast<std::int64_t>(s) % mod == residue_) total += dist[s];
        return total;
      }
      case FamilyKind::SumWindow: {
        const auto dist = detail::layer_sum_distribution(n_, k_);
        const std::int64_t width = static_cast<std::int64_t>(d_) * d_;
        BigInt total = 0;
        for (std::size_t s = 0; s < dist.size(); ++s) {
          const auto twice = 2 * static_cast<std::int64_t>(s);
          if (twice >= 2 * center_ - width && twice < 2 * center_ + width) total += dist[s];
        }
        return total;
      }
      case FamilyKind::BoundedDiscrepancy: {
        const int limit = detail::discrepancy_level(d_);
        if (limit < 0) return 0;
        return count_walks(WalkSpec{n_, 0, 0, -limit, limit});
      }
      case FamilyKind::CTS:
        return binomial(t_.size(), t_.size() / 2);
    }
    return 0;
  }

  /// Members in colex order. Throws MaterializationCap when the family is larger than the cap.
  Family materialize() const {
    const BigInt size = count();
    require(size <= cap_, Errc::MaterializationCap,
            std::string(to_string(kind_)) + " family has " + size.str() + " members, cap is " + std::to_string(cap_));
    Family out;
    out.reserve(size.convert_to<std::size_t>());
    switch (kind_) {
      case FamilyKind::Parity:
        for (int s = 0; s <= n_; ++s)
          if (contains_size(s))
            for (const auto& a : patternlab::layer(n_, s)) out.push_back(a);
        break;
      case FamilyKind::Transversal: {
        const int block = n_ / k_;
        std::vector<int> choice(static_cast<std::size_t>(k_), 0);
        for (;;) {
          std::uint64_t bits = 0;
          for (int j = 0; j < k_; ++j) bits |= std::uint64_t{1} << (j * block + choice[static_cast<std::size_t>(j)]);
          out.emplace_back(n_, bits);
          int j = 0;
          while (j < k_ && ++choice[static_cast<std::size_t>(j)] == block) choice[static_cast<std::size_t>(j++)] = 0;
          if (j == k_) break;
        }
        break;
      }
      case FamilyKind::BoundedDiscrepancy: {
        const int limit = detail::discrepancy_level(d_);
        if (limit >= 0) walk_sets(0, 0, 0, limit, out);
        break;
      }
      case FamilyKind::CTS: {
        const int half = t_.size() / 2;
        if (half == 0) {
          out.push_back(s_);
          break;
        }
        for (std::uint64_t u = low_mask(half); u != 0; u = next_same_popcount(u, t_.size()))
          out.emplace_back(n_, s_.bits() | detail::deposit_bits(u, t_.bits()));
        break;
      }
      case FamilyKind::SumResidue:
      case FamilyKind::SumWindow:
        for (const auto& a : patternlab::layer(n_, k_))
          if (contains(a)) out.push_back(a);
        break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// One-line description, e.g. "kind=SumResidue n=8 k=4 d=1 residue=3".
  std::string describe() const {
    std::ostringstream os;
    os << "kind=" << to_string(kind_) << " n=" << n_;
    switch (kind_) {
      case FamilyKind::Parity: os << " m=" << m_ << " variant=" << variant_; break;
      case FamilyKind::Transversal: os << " k=" << k_; break;
      case FamilyKind::SumResidue: os << " k=" << k_ << " d=" << d_ << " residue=" << residue_; break;
      case FamilyKind::SumWindow: os << " k=" << k_ << " d=" << d_ << " center=" << center_; break;
      case FamilyKind::BoundedDiscrepancy: os << " k=" << k_ << " d=" << d_; break;
      case FamilyKind::CTS: os << " k=" << k_ << " S=" << s_.to_string() << " T=" << t_.to_string(); break;
    }
    return os.str();
  }

 private:
  FamilySpec(FamilyKind kind, int n) : kind_(kind), n_(n) {}

  static void check_ground(int n) {
    require(n >= 1 && n <= kMaxGround, Errc::InvalidArgument, "ground set size must lie in [1, 64]");
  }
  static void check_even(int n) {
    check_ground(n);
    require(n % 2 == 0, Errc::InvalidArgument, "middle-layer families need n even");
  }

  bool contains_size(int s) const {
    const int r = s % (2 * m_);
    return variant_ == 1 ? r < m_ : r >= m_;
  }

  void walk_sets(int i, int level, std::uint64_t bits, int limit, Family& out) const {
    if (i == n_) {
      if (level == 0) out.emplace_back(n_, bits);
      return;
    }
    const int remaining = n_ - i;
    if (std::abs(level) > remaining) return;
    if (level + 1 <= limit) walk_sets(i + 1, level + 1, bits | (std::uint64_t{1} << i), limit, out);
    if (level - 1 >= -limit) walk_sets(i + 1, level - 1, bits, limit, out);
  }

  FamilyKind kind_;
  int n_;
  int k_ = -1;
  int d_ = 0;
  int m_ = 0;
  int variant_ = 0;
  std::int64_t residue_ = 0;
  std::int64_t center_ = 0;
  SubsetWord s_;
  SubsetWord t_;
  std::uint64_t cap_ = kDefaultMaterializationCap;
};

inline Family parity_family(int n, int m, int variant) { return FamilySpec::parity(n, m, variant).materialize(); }

inline Family transversal_family(int n, int k) { return FamilySpec::transversal(n, k).materialize(); }

inline Family sum_residue_family(int n, int d, std::int64_t residue) {
  return FamilySpec::sum_residue(n, d, residue).materialize();
}

/// Sizes of all nd residue classes of the middle layer, indexed by residue.
inline std::vector<BigInt> sum_residue_sizes(int n, int d) {
  require(n >= 2 && n % 2 == 0 && n <= kMaxGround, Errc::InvalidArgument, "sum residues need n even");
  require(d >= 1, Errc::InvalidArgument, "sum residues need d >= 1");
  const auto dist = detail::layer_sum_distribution(n, n / 2);
  const std::size_t mod = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
  std::vector<BigInt> sizes(mod, 0);
  for (std::size_t s = 0; s < dist.size(); ++s) sizes[s % mod] += dist[s];
  return sizes;
}

/// Residue with the largest class (smallest residue on ties).
inline FamilySpec best_sum_residue(int n, int d) {
  const auto sizes = sum_residue_sizes(n, d);
  const auto best = std::max_element(sizes.begin(), sizes.end()) - sizes.begin();
  return FamilySpec::sum_residue(n, d, best);
}

inline Family sum_window_family(int n, int d, std::int64_t center) {
  return FamilySpec::sum_window(n, d, center).materialize();
}

/// Window center maximising the window family (smallest center on ties).
inline FamilySpec best_sum_window(int n, int d) {
  require(n >= 2 && n % 2 == 0 && n <= kMaxGround, Errc::InvalidArgument, "sum windows need n even");
  const auto dist = detail::layer_sum_distribution(n, n / 2);
  std::optional<FamilySpec> best;
  BigInt best_size = -1;
  for (std::int64_t c = 0; c <= static_cast<std::int64_t>(dist.size()); ++c) {
    auto spec = FamilySpec::sum_window(n, d, c);
    const auto size = spec.count();
    if (size > best_size) {
      best_size = size;
      best = spec;
    }
  }
  return *best;
}

inline Family bounded_discrepancy_family(int n, int d) { return FamilySpec::bounded_discrepancy(n, d).materialize(); }

inline Family cts_family(const SubsetWord& s, const SubsetWord& t) { return FamilySpec::cts(s, t).materialize(); }

/// Every balanced pattern of order |T| is formed by some ordered pair of C_{T,S}.
inline bool cts_contains_all_patterns(const SubsetWord& s, const SubsetWord& t) {
  require(t.size() % 2 == 0, Errc::InvalidArgument, "pattern completeness needs |T| = 2d");
  const Family family = cts_family(s, t);
  for (const auto& p : balanced_patterns(t.size() / 2))
    if (!find_pattern_pair(family, p)) return false;
  return true;
}

/// Completeness check on the ground set [4d] with S = [d] and T = [d+1, 3d].
inline bool cts_contains_all_patterns(int d) {
  require(d >= 1 && 4 * d <= kMaxGround, Errc::InvalidArgument, "cts_contains_all_patterns needs 1 <= d <= 16");
  const int n = 4 * d;
  return cts_contains_all_patterns(SubsetWord::interval(n, 1, d), SubsetWord::interval(n, d + 1, 3 * d));
}

// Family text files: a "# family ..." header line, then one set per line.

inline void write_family(std::ostream& os, const FamilySpec& spec, std::span<const SubsetWord> family) {
  os << "# family " << spec.describe() << " size=" << family.size() << '\n';
  for (const auto& a : family) os << a.to_string() << '\n';
}

struct FamilyFile {
  std::string header;  // text after "# family ", empty when absent
  int n = 0;
  Family members;
};

/// Reads a family file. The ground set size comes from the header's n= field,
/// or from `n_hint` when the file has no header.
inline FamilyFile read_family(std::istream& is, int n_hint = 0) {
  FamilyFile file;
  file.n = n_hint;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    const auto text = detail::trim(line);
    if (first && text.rfind("# family", 0) == 0) {
      file.header = std::string(detail::trim(text.substr(8)));
      std::istringstream fields(file.header);
      std::string field;
      while (fields >> field)
        if (field.rfind("n=", 0) == 0) file.n = std::stoi(field.substr(2));
      first = false;
      continue;
    }
    first = false;
    if (text.empty() || text.front() == '#') continue;
    require(file.n >= 1, Errc::ParseError, "family file has no n= header and no ground size was given");
    file.members.push_back(SubsetWord::parse(text, file.n));
  }
  return file;
}

}  // namespace patternlab
