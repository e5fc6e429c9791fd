#pragma once

// Randomised and exact checks of the probabilistic devices: restriction to a
// random sub-cube, the interval process for IP(d)-free families, the G statistic
// and the tail estimates behind the bad-set bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "patternlab/altstruct.hpp"
#include "patternlab/combinatorics.hpp"
#include "patternlab/error.hpp"
#include "patternlab/extremal.hpp"
#include "patternlab/patterns.hpp"
#include "patternlab/rng.hpp"

namespace patternlab {

/// Sample mean with a 3-sigma normal-approximation radius.
struct Estimate {
  double mean = 0.0;
  double radius = 0.0;
  std::uint64_t trials = 0;

  bool covers(double value) const { return std::abs(value - mean) <= radius; }
};

namespace detail {

class RunningMoments {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  Estimate estimate() const {
    Estimate e;
    e.trials = count_;
    e.mean = mean_;
    if (count_ > 1) e.radius = 3.0 * std::sqrt(m2_ / static_cast<double>(count_ - 1)) / std::sqrt(static_cast<double>(count_));
    return e;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline int uniform_layer(std::span<const SubsetWord> family) {
  if (family.empty()) return -1;
  const int k = family.front().size();
  for (const auto& a : family) {
    require(a.n() == family.front().n(), Errc::GroundMismatch, "family members on different ground sets");
    require(a.size() == k, Errc::LayerMismatch, "restriction needs a uniform family");
  }
  return k;
}

}  // namespace detail

/// A_{T,U} = { A' in C(T, l) : A' cup U in F }, relabelled onto [|T|] in order.
inline Family restrict_family(std::span<const SubsetWord> family, const SubsetWord& t, const SubsetWord& u, int l) {
  require(t.n() == u.n(), Errc::GroundMismatch, "T and U on different ground sets");
  require(t.is_disjoint_from(u), Errc::OverlappingSupports, "T and U must be disjoint");
  require(l >= 0 && l <= t.size(), Errc::InvalidArgument, "restricted layer must lie in [0, |T|]");
  const int k = detail::uniform_layer(family);
  Family out;
  if (k < 0) return out;
  require(family.front().n() == t.n(), Errc::GroundMismatch, "family and T on different ground sets");
  require(u.size() == k - l, Errc::LayerMismatch,
          "|U| = " + std::to_string(u.size()) + " but k - l = " + std::to_string(k - l));
  for (const auto& a : family) {
    if (!u.is_subset_of(a)) continue;
    const SubsetWord rest = a - u;
    if (rest.size() != l || !rest.is_subset_of(t)) continue;
    out.emplace_back(t.size(), detail::extract_bits(rest.bits(), t.bits()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Average of |A_{T,U}| / C(m, l) over every disjoint T (|T| = m) and U (|U| = k - l),
/// by full enumeration. Equals |F| / C(n, k) when F is k-uniform.
inline Rational exact_restriction_density(std::span<const SubsetWord> family, int n, int k, int m, int l) {
  require(n >= 1 && n <= 24, Errc::InvalidArgument, "exact restriction averages enumerate; n <= 24");
  require(m >= 0 && m <= n && l >= 0 && l <= m && l <= k && k - l <= n - m, Errc::InvalidArgument,
          "restriction parameters out of range");
  const std::unordered_set<SubsetWord> members(family.begin(), family.end());
  BigInt hits = 0;
  BigInt pairs = 0;
  const std::uint64_t ground = low_mask(n);
  auto each_subset = [](std::uint64_t pool, int count, auto&& fn) {
    if (count == 0) {
      fn(std::uint64_t{0});
      return;
    }
    const int size = std::popcount(pool);
    if (count > size) return;
    for (std::uint64_t r = low_mask(count); r != 0; r = next_same_popcount(r, size)) fn(detail::deposit_bits(r, pool));
  };
  each_subset(ground, m, [&](std::uint64_t t) {
    each_subset(ground & ~t, k - l, [&](std::uint64_t u) {
      ++pairs;
      each_subset(t, l, [&](std::uint64_t a) {
        if (members.count(SubsetWord(n, a | u))) ++hits;
      });
    });
  });
  return Rational(hits, pairs * binomial(m, l));
}

/// Monte Carlo estimate of E |A_{T,U}| / C(m, l); trial i draws from stream i.
inline Estimate sampled_restriction_density(std::span<const SubsetWord> family, int n, int k, int m, int l,
                                            std::uint64_t trials, std::uint64_t seed) {
  require(m >= 0 && m <= n && l >= 0 && l <= m && l <= k && k - l <= n - m, Errc::InvalidArgument,
          "restriction parameters out of range");
  const double scale = binomial(m, l).convert_to<double>();
  detail::RunningMoments moments;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng(seed, i);
    const SubsetWord t(n, rng.subset_of(low_mask(n), m));
    const SubsetWord u(n, rng.subset_of(low_mask(n) & ~t.bits(), k - l));
    moments.add(static_cast<double>(restrict_family(family, t, u, l).size()) / scale);
  }
  return moments.estimate();
}

/// Partition of [n] into m = floor(n / 8d^2) consecutive intervals of length 8d^2,
/// with the remainder handed out one element at a time to the leading intervals.
struct IntervalProcessConfig {
  int n = 0;
  int d = 0;
  std::vector<SubsetWord> intervals;

  IntervalProcessConfig(int n_, int d_) : n(n_), d(d_) {
    require(n >= 2 && n <= kMaxGround, Errc::InvalidArgument, "interval process needs 2 <= n <= 64");
    require(n % 2 == 0, Errc::InvalidArgument, "interval process works on the middle layer; n must be even");
    require(d >= 1, Errc::InvalidArgument, "interval process needs d >= 1");
    require(8 * d * d <= n, Errc::RegimeViolation,
            "interval process needs 8 d^2 <= n, got n = " + std::to_string(n) + ", d = " + std::to_string(d));
    const int base = 8 * d * d;
    const int m = n / base;
    std::vector<int> sizes(static_cast<std::size_t>(m), base);
    for (int r = 0; r < n - m * base; ++r) ++sizes[static_cast<std::size_t>(r % m)];
    int lo = 1;
    for (int s : sizes) {
      intervals.push_back(SubsetWord::interval(n, lo, lo + s - 1));
      lo += s;
    }
  }

  int m() const noexcept { return static_cast<int>(intervals.size()); }
};

struct TrialOutcome {
  int indicator_sum = 0;           // number of i with A_i in F
  std::vector<int> j;              // 1-indexed intervals with |I_i \ T| >= d
  std::vector<SubsetWord> chosen;  // A_i for i in J, in order
};

/// One run of the process: T uniform in C([n], n/2 - d); for each i in J a uniform
/// d-subset S_i of I_i \ T gives A_i = T cup S_i. Any two such A_i form IP(d), so an
/// IP(d)-free family contains at most one; a larger sum throws FreenessViolated.
inline TrialOutcome interval_process_trial(const IntervalProcessConfig& cfg,
                                           const std::unordered_set<SubsetWord>& family, Rng& rng) {
  TrialOutcome out;
  const std::uint64_t t = rng.subset_of(low_mask(cfg.n), cfg.n / 2 - cfg.d);
  for (int i = 0; i < cfg.m(); ++i) {
    const std::uint64_t free = cfg.intervals[static_cast<std::size_t>(i)].bits() & ~t;
    if (std::popcount(free) < cfg.d) continue;
    out.j.push_back(i + 1);
    const SubsetWord a(cfg.n, t | rng.subset_of(free, cfg.d));
    out.chosen.push_back(a);
    if (family.count(a)) ++out.indicator_sum;
  }
  require(out.indicator_sum <= 1, Errc::FreenessViolated,
          "interval process found " + std::to_string(out.indicator_sum) + " members; the family is not IP(" +
              std::to_string(cfg.d) + ")-free");
  return out;
}

/// P(i in J) = P(|I_i \ T| >= d), exact hypergeometric sum.
inline Rational interval_membership_probability(const IntervalProcessConfig& cfg, int i) {
  require(i >= 1 && i <= cfg.m(), Errc::InvalidArgument, "interval index out of range");
  const int size = cfg.intervals[static_cast<std::size_t>(i) - 1].size();
  const int draws = cfg.n / 2 - cfg.d;
  BigInt hits = 0;
  // |I_i cap T| = x; need size - x >= d.
  for (int x = 0; x <= std::min(size - cfg.d, draws); ++x) {
    if (draws - x > cfg.n - size) continue;
    hits += binomial(size, x) * binomial(cfg.n - size, draws - x);
  }
  return Rational(hits, binomial(cfg.n, draws));
}

struct ProcessSummary {
  std::uint64_t trials = 0;
  int max_indicator_sum = 0;
  std::uint64_t hits = 0;                // trials with a member of F among the A_i
  Estimate j_nonempty;                   // frequency of |J| >= 1
  std::vector<Estimate> membership;      // per interval: frequency of i in J
  std::vector<Rational> exact_membership;
};

/// `trials` independent runs; run r draws from stream r.
inline ProcessSummary run_interval_process(const IntervalProcessConfig& cfg, std::span<const SubsetWord> family,
                                           std::uint64_t trials, std::uint64_t seed) {
  const std::unordered_set<SubsetWord> members(family.begin(), family.end());
  ProcessSummary s;
  s.trials = trials;
  detail::RunningMoments nonempty;
  std::vector<detail::RunningMoments> per(static_cast<std::size_t>(cfg.m()));
  for (std::uint64_t r = 0; r < trials; ++r) {
    Rng rng(seed, r);
    const TrialOutcome t = interval_process_trial(cfg, members, rng);
    s.max_indicator_sum = std::max(s.max_indicator_sum, t.indicator_sum);
    if (t.indicator_sum > 0) ++s.hits;
    nonempty.add(t.j.empty() ? 0.0 : 1.0);
    std::vector<char> in_j(static_cast<std::size_t>(cfg.m()), 0);
    for (int i : t.j) in_j[static_cast<std::size_t>(i) - 1] = 1;
    for (std::size_t i = 0; i < per.size(); ++i) per[i].add(in_j[i] ? 1.0 : 0.0);
  }
  s.j_nonempty = nonempty.estimate();
  for (std::size_t i = 0; i < per.size(); ++i) {
    s.membership.push_back(per[i].estimate());
    s.exact_membership.push_back(interval_membership_probability(cfg, static_cast<int>(i) + 1));
  }
  return s;
}

/// G(A) = number of intervals with |A cap I_i| >= |I_i|/2 + d.
inline int g_statistic(const SubsetWord& a, const IntervalProcessConfig& cfg) {
  require(a.n() == cfg.n, Errc::GroundMismatch, "set and intervals on different ground sets");
  int g = 0;
  for (const auto& interval : cfg.intervals)
    if (2 * std::popcount(a.bits() & interval.bits()) >= interval.size() + 2 * cfg.d) ++g;
  return g;
}

/// Exhaustive histogram of G over the middle layer: counts[g] = #{A : G(A) = g}.
inline std::vector<BigInt> g_histogram(const IntervalProcessConfig& cfg) {
  require(cfg.n <= 26, Errc::InvalidArgument, "g_histogram enumerates the middle layer; n <= 26");
  std::vector<BigInt> counts(static_cast<std::size_t>(cfg.m()) + 1, 0);
  for (std::uint64_t b = low_mask(cfg.n / 2); b != 0; b = next_same_popcount(b, cfg.n))
    ++counts[static_cast<std::size_t>(g_statistic(SubsetWord(cfg.n, b), cfg))];
  return counts;
}

/// Fraction of middle-layer sets with G(A) < m/5.
inline Rational g_bad_fraction(const IntervalProcessConfig& cfg) {
  const auto counts = g_histogram(cfg);
  BigInt bad = 0;
  for (std::size_t g = 0; g < counts.size(); ++g)
    if (5 * static_cast<int>(g) < cfg.m()) bad += counts[g];
  return Rational(bad, binomial(cfg.n, cfg.n / 2));
}

/// P(X_i = 0) = P(|A cap I| <= |I|/2 + d) for A uniform in the middle layer and
/// |I| = 8d^2; the quantity bounded by 0.79 in the interval argument.
inline Rational interval_miss_probability(int n, int d) {
  require(n % 2 == 0 && d >= 1 && 8 * d * d <= n, Errc::RegimeViolation, "needs n even and 8 d^2 <= n");
  const int size = 8 * d * d;
  BigInt miss = 0;
  for (int x = 0; x <= std::min(size / 2 + d, n / 2); ++x) {
    if (n / 2 - x > n - size) continue;
    miss += binomial(size, x) * binomial(n - size, n / 2 - x);
  }
  return Rational(miss, binomial(n, n / 2));
}

struct ConditionalCheck {
  bool holds = true;
  std::uint64_t sets_checked = 0;  // (A, i) pairs meeting the hypothesis
  Rational min_probability;        // smallest exact P(A_i = A | i in J) among them
  Rational threshold;              // 1 / C(n, n/2)
};

/// For every middle-layer A and interval i with |A cap I_i| >= |I_i|/2 + d, computes
/// P(A_i = A | i in J) exactly from the process (enumerating T) and compares it with
/// 1 / C(n, n/2).
inline ConditionalCheck conditional_probability_check(const IntervalProcessConfig& cfg) {
  require(cfg.n <= 16, Errc::InvalidArgument, "conditional_probability_check enumerates pairs of sets; n <= 16");
  ConditionalCheck out;
  out.threshold = Rational(1, binomial(cfg.n, cfg.n / 2));
  const int draws = cfg.n / 2 - cfg.d;
  const BigInt t_count = binomial(cfg.n, draws);
  bool first = true;
  for (int i = 1; i <= cfg.m(); ++i) {
    const std::uint64_t interval = cfg.intervals[static_cast<std::size_t>(i) - 1].bits();
    const Rational p_in_j = interval_membership_probability(cfg, i);
    for (std::uint64_t a = low_mask(cfg.n / 2); a != 0; a = next_same_popcount(a, cfg.n)) {
      if (2 * std::popcount(a & interval) < std::popcount(interval) + 2 * cfg.d) continue;
      // A_i = A exactly when T = A \ S for a d-subset S of A cap I_i, and S is then drawn.
      Rational joint = 0;
      const std::uint64_t pool = a & interval;
      for (std::uint64_t r = low_mask(cfg.d); r != 0; r = next_same_popcount(r, std::popcount(pool))) {
        const std::uint64_t s = detail::deposit_bits(r, pool);
        const std::uint64_t t = a & ~s;
        const int free = std::popcount(interval & ~t);
        joint += Rational(1, t_count * binomial(free, cfg.d));
      }
      const Rational p = joint / p_in_j;
      ++out.sets_checked;
      if (first || p < out.min_probability) out.min_probability = p;
      first = false;
      if (p < out.threshold) out.holds = false;
    }
  }
  return out;
}

struct ConcentrationReport {
  int n = 0;
  int m = 0;
  double threshold = 0;       // event |T(A)| <= threshold * n / 2^m
  Estimate empirical;         // Monte Carlo tail over uniform A in P[n]
  Rational exact_tail;        // |T(A)| ~ Bin(n/m, m/2^m)
  long double chernoff = 0;   // exp(-(1 - threshold)^2 mu / 2)
  long double stated = 0;     // e^{-n/2^{m+1}}, the bound quoted for threshold 1/2
  bool empirical_within_chernoff = false;
  bool exact_within_chernoff = false;
  bool exact_within_stated = false;
};

/// Tail of the singleton-hit count T(A) for A uniform in P[n], intervals of length m.
inline ConcentrationReport concentration_check(int n, int m, double threshold, std::uint64_t trials,
                                               std::uint64_t seed) {
  require(threshold > 0 && threshold < 1, Errc::InvalidArgument, "threshold must lie in (0, 1)");
  require(m >= 1 && n % m == 0, Errc::IndivisibleGround, std::to_string(m) + " does not divide " + std::to_string(n));
  require(n <= kMaxGround, Errc::InvalidArgument, "concentration_check samples subsets of [n]; n <= 64");
  ConcentrationReport r;
  r.n = n;
  r.m = m;
  r.threshold = threshold;
  const int k = n / m;
  const long double mu = static_cast<long double>(n) / std::ldexp(1.0L, m);
  const long double cut = threshold * mu;
  detail::RunningMoments moments;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng(seed, i);
    const SubsetWord a(n, rng() & low_mask(n));
    moments.add(static_cast<long double>(alt_decompose(a, m).t.size()) <= cut ? 1.0 : 0.0);
  }
  r.empirical = moments.estimate();
  // Exact binomial tail: P(interval singly hit) = m / 2^m, intervals independent.
  const BigInt other = (BigInt(1) << m) - m;
  BigInt tail = 0;
  for (int t = 0; t <= k && static_cast<long double>(t) <= cut; ++t) {
    BigInt term = binomial(k, t);
    for (int j = 0; j < t; ++j) term *= m;
    for (int j = t; j < k; ++j) term *= other;
    tail += term;
  }
  r.exact_tail = Rational(tail, BigInt(1) << n);
  r.chernoff = std::exp(-(1.0L - threshold) * (1.0L - threshold) * mu / 2.0L);
  r.stated = std::exp(-static_cast<long double>(n) / std::ldexp(1.0L, m + 1));
  r.empirical_within_chernoff = r.empirical.mean <= static_cast<double>(r.chernoff) + r.empirical.radius;
  const long double exact = to_long_double(r.exact_tail);
  r.exact_within_chernoff = exact <= r.chernoff;
  r.exact_within_stated = exact <= r.stated;
  return r;
}

}  // namespace patternlab
