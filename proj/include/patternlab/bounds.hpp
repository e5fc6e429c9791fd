#pragma once

// Evaluators for the density bounds: the closed form a_d k^{-c_d}, the two
// reduction lemmas, the recursion that drives them, and the interval/alternating
// pattern bounds with their hidden constants exposed.
//
// k is carried as long double throughout: the recursion is only informative for
// k >= a_d^{1/c_d}, which is already about 2^213 for d = 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "patternlab/combinatorics.hpp"
#include "patternlab/error.hpp"
#include "patternlab/patterns.hpp"

namespace patternlab {

/// One step of a recursive evaluation.
struct BoundStep {
  int depth = 0;
  std::string rule;  // Base_d1 | Lemma22 | Lemma23 | Trivial
  long double k = 0;
  Pattern pattern;
  std::string params;
  long double value = 1;
};

struct BoundRecord {
  std::string name;  // Thm1 | Thm2 | Thm3 | Lemma22 | Lemma23 | Base_d1 | Recursive | Recursive(optimized)
  std::optional<long double> n;
  long double k = 0;
  int d = 0;
  std::vector<std::pair<std::string, std::string>> params;
  long double value = 1;          // clamped to [0, 1]
  std::optional<Rational> exact;  // when the value is rational
  bool valid = true;              // every precondition held
  bool asymptotic = false;        // constant hides o(1) terms; advisory only
  bool clamped = false;
  std::vector<BoundStep> trace;

  static std::string csv_header() { return "name,n,k,d,params,value,asymptotic"; }

  std::string csv_row() const {
    std::string params_text;
    for (const auto& [key, val] : params) {
      if (!params_text.empty()) params_text += ';';
      params_text += key + '=' + val;
    }
    if (!valid) params_text += std::string(params_text.empty() ? "" : ";") + "valid=0";
    return name + ',' + (n ? format_count(*n) : std::string()) + ',' + format_count(k) + ',' + std::to_string(d) +
           ',' + params_text + ',' + (exact ? to_fraction_string(*exact) : format_value(value)) + ',' +
           (asymptotic ? "1" : "0");
  }

  static std::string format_count(long double x) {
    char buf[64];
    if (x < 1e18L && x == std::floor(x)) {
      std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(x));
    } else {
      std::snprintf(buf, sizeof buf, "%.6Le", x);
    }
    return buf;
  }

  static std::string format_value(long double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", x);
    return buf;
  }
};

namespace detail {

inline std::string num(long double x) { return BoundRecord::format_value(x); }

inline long double clamp_unit(long double x, bool* clamped = nullptr) {
  if (x > 1) {
    if (clamped) *clamped = true;
    return 1;
  }
  return std::max<long double>(x, 0);
}

}  // namespace detail

/// a_d = (8d)^{5d}, in logarithmic form.
inline long double log_a(int d) { return 5.0L * d * std::log(8.0L * d); }

/// c_d = 6 d 8^{-d}.
inline long double c_exponent(int d) { return 6.0L * d * std::pow(8.0L, -d); }

/// a_d^{1/c_d}: the closed form is below 1 from here on.
inline long double thm1_threshold(int d) { return std::exp(log_a(d) / c_exponent(d)); }

/// min(1, a_d k^{-c_d}).
inline BoundRecord thm1_bound(long double k, int d) {
  require(k >= 1 && std::isfinite(k) && d >= 1, Errc::InvalidArgument, "thm1_bound needs finite k >= 1 and d >= 1");
  BoundRecord r;
  r.name = "Thm1";
  r.k = k;
  r.d = d;
  r.params = {{"a_d", detail::num(std::exp(log_a(d)))}, {"c_d", detail::num(c_exponent(d))}};
  const long double log_value = log_a(d) - c_exponent(d) * std::log(k);
  r.value = log_value >= 0 ? 1.0L : std::exp(log_value);
  r.clamped = log_value > 0;
  return r;
}

/// 1/k: a +- free k-uniform family on [2k] puts at most one member inside each (k+1)-set.
inline Rational base_delta1(std::uint64_t k) {
  require(k >= 1, Errc::InvalidArgument, "base_delta1 needs k >= 1");
  return Rational(1, k);
}

/// Smallest admissible gamma for the differing-signs reduction at k: 16 ln k / sqrt k.
inline long double lemma22_gamma_floor(long double k) { return 16.0L * std::log(k) / std::sqrt(k); }

/// max(gamma, 6 sqrt(delta_inner)), clamped to 1. delta_inner bounds the density at
/// ceil(gamma^2 k / 64) for the pattern with its end signs removed.
inline long double lemma22_bound(long double k, long double gamma, long double delta_inner) {
  require(k >= 1, Errc::InvalidArgument, "lemma22_bound needs k >= 1");
  require(gamma >= lemma22_gamma_floor(k) && gamma <= 1, Errc::GammaOutOfRange,
          "gamma " + detail::num(gamma) + " outside [" + detail::num(lemma22_gamma_floor(k)) + ", 1] at k = " +
              detail::num(k));
  require(delta_inner >= 0 && delta_inner <= 1, Errc::InvalidArgument, "inner density must lie in [0, 1]");
  return detail::clamp_unit(std::max(gamma, 6.0L * std::sqrt(delta_inner)));
}

inline long double lemma22_inner_k(long double k, long double gamma) { return std::ceil(gamma * gamma * k / 64.0L); }

struct Lemma23Terms {
  long double tail = 0;   // 2 e^{-k1/12}
  long double first = 0;  // 4 delta(k1, d1)
  long double third = 0;  // 4 (3 k1)^{2 d1} delta(k2, d2)
};

/// The three terms of the same-signs reduction for k = 2 k1 + k2. The mirrored form
/// (k = k1 + 2 k2) swaps the roles of the two halves.
inline Lemma23Terms lemma23_terms(long double k1, long double k2, int d1, int d2, long double delta1,
                                  long double delta2, bool mirrored = false) {
  require(k1 >= 1 && k2 >= 1, Errc::BadSplit, "same-sign split needs k1, k2 >= 1");
  require(d1 >= 1 && d2 >= 1, Errc::BadSplit, "same-sign split needs d1, d2 >= 1");
  require(delta1 >= 0 && delta2 >= 0, Errc::InvalidArgument, "densities must be non-negative");
  if (mirrored) {
    std::swap(k1, k2);
    std::swap(d1, d2);
    std::swap(delta1, delta2);
  }
  Lemma23Terms t;
  t.tail = 2.0L * std::exp(-k1 / 12.0L);
  t.first = 4.0L * delta1;
  // Capped in the log domain so huge k1 cannot overflow; the bound is clamped anyway.
  const long double log_factor = std::log(4.0L) + 2.0L * d1 * std::log(3.0L * k1);
  t.third = delta2 <= 0 ? 0.0L : std::exp(std::min<long double>(log_factor + std::log(delta2), 1.0L));
  return t;
}

/// max of the three terms, clamped to 1.
inline long double lemma23_bound(long double k1, long double k2, int d1, int d2, long double delta1,
                                 long double delta2, bool mirrored = false) {
  const Lemma23Terms t = lemma23_terms(k1, k2, d1, d2, delta1, delta2, mirrored);
  return detail::clamp_unit(std::max({t.tail, t.first, t.third}));
}

struct PatternSplit {
  int d1 = 0;
  Pattern q1;
  Pattern q2;
};

/// Shortest proper balanced prefix: smallest d1 in [1, d-1] with c_{2 d1} = 0.
/// Throws NoSplit when P has none (for instance ++--).
inline PatternSplit first_balanced_split(const Pattern& p) {
  require(p.is_balanced(), Errc::UnbalancedPattern, "splitting needs a balanced pattern");
  const int d = p.d();
  for (int d1 = 1; d1 < d; ++d1)
    if (p.prefix_balance(2 * d1) == 0) return PatternSplit{d1, p.slice(0, 2 * d1), p.slice(2 * d1, 2 * (d - d1))};
  fail(Errc::NoSplit, "no proper balanced prefix in " + p.to_string());
}

/// The split used when P starts and ends with the same sign; such a split always exists.
inline PatternSplit split_pattern(const Pattern& p) {
  require(p.is_balanced(), Errc::UnbalancedPattern, "split_pattern needs a balanced pattern");
  require(p.d() >= 2, Errc::InvalidArgument, "split_pattern needs d >= 2");
  require(p.is_plus(0) == p.is_plus(p.order() - 1), Errc::InvalidArgument,
          "split_pattern needs equal first and last signs, got " + p.to_string());
  return first_balanced_split(p);
}

namespace detail {

struct RecursionValue {
  long double value = 1;
  bool valid = true;
  std::vector<BoundStep> trace;
};

class RecursionMemo {
 public:
  using Key = std::tuple<long double, int, std::uint64_t, bool>;

  std::optional<RecursionValue> find(const Key& key) const {
    std::shared_lock lock(mutex_);
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }
  void store(const Key& key, const RecursionValue& value) {
    std::unique_lock lock(mutex_);
    table_.try_emplace(key, value);
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, RecursionValue> table_;
};

inline RecursionMemo& recursion_memo() {
  static RecursionMemo memo;
  return memo;
}

inline RecursionValue shift_trace(RecursionValue v, int by) {
  for (auto& step : v.trace) step.depth += by;
  return v;
}

// Candidate gammas for the optimised mode: the default choice plus a log grid.
inline std::vector<long double> gamma_grid(long double k, long double default_gamma) {
  std::vector<long double> out{default_gamma};
  const long double lo = lemma22_gamma_floor(k);
  if (lo >= 1) return out;
  for (int i = 0; i <= 48; ++i) out.push_back(lo * std::pow(1.0L / lo, i / 48.0L));
  return out;
}

inline RecursionValue recurse(long double k, const Pattern& p, bool optimize);

inline RecursionValue evaluate(long double k, const Pattern& p, bool optimize) {
  const int d = p.d();
  RecursionValue out;
  BoundStep step;
  step.k = k;
  step.pattern = p;
  if (d == 1) {
    step.rule = "Base_d1";
    out.value = 1.0L / k;
  } else if (p.is_plus(0) != p.is_plus(2 * d - 1)) {
    step.rule = "Lemma22";
    const Pattern q = p.slice(1, 2 * d - 2);
    const long double default_gamma = 8.0L * std::exp(log_a(d - 1) / 2.0L) * std::pow(k, -c_exponent(d - 1) / 4.0L);
    std::vector<long double> gammas = optimize ? gamma_grid(k, default_gamma) : std::vector<long double>{default_gamma};
    bool any = false;
    for (long double gamma : gammas) {
      if (gamma < lemma22_gamma_floor(k) || gamma > 1) continue;
      const RecursionValue inner = recurse(lemma22_inner_k(k, gamma), q, optimize);
      const long double value = lemma22_bound(k, gamma, inner.value);
      if (!any || value < out.value) {
        out.value = value;
        out.valid = inner.valid;
        out.trace = shift_trace(inner, 1).trace;
        step.params = "gamma=" + num(gamma) + ";inner_k=" + num(lemma22_inner_k(k, gamma)) + ";Q=" + q.to_string();
      }
      any = true;
    }
    if (!any) {
      step.rule = "Trivial";
      step.params = "gamma=" + num(default_gamma) + ";reason=gamma_out_of_range";
      out.value = 1;
      out.valid = false;
      out.trace.clear();
    }
  } else {
    step.rule = "Lemma23";
    const PatternSplit split = split_pattern(p);
    const int d1 = split.d1;
    const int d2 = d - d1;
    // The halves swap roles when the first block is the larger one.
    const bool mirrored = d1 > d2;
    const int small_d = mirrored ? d2 : d1;
    const int large_d = mirrored ? d1 : d2;
    const Pattern& small_q = mirrored ? split.q2 : split.q1;
    const Pattern& large_q = mirrored ? split.q1 : split.q2;
    const long double beta = c_exponent(large_d) / (2.0L * small_d + c_exponent(small_d));
    const long double default_k1 = std::ceil(std::pow(k, beta));
    std::vector<long double> choices{default_k1};
    if (optimize)
      for (int i = 1; i <= 48; ++i) choices.push_back(std::ceil(std::pow(k / 3.0L, i / 48.0L)));
    bool any = false;
    for (long double small_k : choices) {
      const long double large_k = k - 2.0L * small_k;
      if (small_k < 1 || large_k < 1) continue;
      const RecursionValue small = recurse(small_k, small_q, optimize);
      const RecursionValue large = recurse(large_k, large_q, optimize);
      const long double value =
          mirrored ? lemma23_bound(large_k, small_k, d1, d2, large.value, small.value, true)
                   : lemma23_bound(small_k, large_k, d1, d2, small.value, large.value, false);
      if (!any || value < out.value) {
        out.value = value;
        out.valid = small.valid && large.valid;
        out.trace = shift_trace(small, 1).trace;
        const auto rest = shift_trace(large, 1).trace;
        out.trace.insert(out.trace.end(), rest.begin(), rest.end());
        step.params = std::string(mirrored ? "mirrored=1;" : "") + "d1=" + std::to_string(d1) +
                      ";d2=" + std::to_string(d2) + ";k1=" + num(mirrored ? large_k : small_k) +
                      ";k2=" + num(mirrored ? small_k : large_k) + ";Q1=" + split.q1.to_string() +
                      ";Q2=" + split.q2.to_string();
      }
      any = true;
    }
    if (!any) {
      step.rule = "Trivial";
      step.params = "k1=" + num(default_k1) + ";reason=split_exceeds_k";
      out.value = 1;
      out.valid = false;
      out.trace.clear();
    }
  }
  out.value = clamp_unit(out.value);
  step.value = out.value;
  out.trace.insert(out.trace.begin(), step);
  return out;
}

inline RecursionValue recurse(long double k, const Pattern& p, bool optimize) {
  const RecursionMemo::Key key{k, p.order(), p.plus_mask(), optimize};
  if (auto hit = recursion_memo().find(key)) return *hit;
  RecursionValue value = evaluate(k, p, optimize);
  recursion_memo().store(key, value);
  return value;
}

}  // namespace detail

/// Bound on delta(2k, k, P) obtained by unwinding the two reduction lemmas with the
/// parameter choices of the induction. A step whose preconditions fail contributes
/// the trivial bound 1 and clears `valid`. `optimize` searches gamma and k1 over a
/// grid instead; that mode departs from the standard parameter choice.
inline BoundRecord recursive_delta_bound(long double k, const Pattern& p, bool optimize = false) {
  require(p.is_balanced(), Errc::UnbalancedPattern, "recursive_delta_bound needs a balanced pattern");
  require(k >= 1 && std::isfinite(k), Errc::InvalidArgument, "recursive_delta_bound needs finite k >= 1");
  const detail::RecursionValue v = detail::recurse(std::floor(k), p, optimize);
  BoundRecord r;
  r.name = optimize ? "Recursive(optimized)" : "Recursive";
  r.k = std::floor(k);
  r.d = p.d();
  r.params = {{"pattern", p.to_string()}, {"steps", std::to_string(v.trace.size())}};
  r.value = v.value;
  r.valid = v.valid;
  r.trace = v.trace;
  if (p.d() == 1 && r.k < 1e18L) r.exact = base_delta1(static_cast<std::uint64_t>(r.k));
  return r;
}

inline constexpr long double kThm2DefaultConstant = 80.0L;
inline constexpr long double kThm3DefaultConstant = 2.0L;

/// C d^2 / n for the interval pattern, regime 8 d^2 <= n. Advisory: the constant
/// absorbs the bad-set o(1) term.
inline BoundRecord thm2_bound(std::int64_t n, int d, long double c = kThm2DefaultConstant) {
  require(d >= 1 && n >= 1, Errc::InvalidArgument, "thm2_bound needs n, d >= 1");
  require(8LL * d * d <= n, Errc::RegimeViolation,
          "interval bound needs 8 d^2 <= n, got n = " + std::to_string(n) + ", d = " + std::to_string(d));
  BoundRecord r;
  r.name = "Thm2";
  r.n = static_cast<long double>(n);
  r.k = static_cast<long double>(n / 2);
  r.d = d;
  const std::int64_t m = n / (8LL * d * d);
  r.params = {{"C", detail::num(c)}, {"m", std::to_string(m)}};
  r.value = detail::clamp_unit(c * d * d / static_cast<long double>(n), &r.clamped);
  r.asymptotic = true;
  return r;
}

/// C / m with m = floor(log2(n / d^2) / 2), regime d^2 < n and m >= 1. Advisory.
inline BoundRecord thm3_bound(std::int64_t n, int d, long double c = kThm3DefaultConstant) {
  require(d >= 1 && n >= 1, Errc::InvalidArgument, "thm3_bound needs n, d >= 1");
  require(static_cast<std::int64_t>(d) * d < n, Errc::RegimeViolation,
          "alternating bound needs d^2 < n, got n = " + std::to_string(n) + ", d = " + std::to_string(d));
  // floor(log2(n / d^2)) computed exactly on integers.
  const std::int64_t d2 = static_cast<std::int64_t>(d) * d;
  std::int64_t log2 = 0;
  while ((d2 << (log2 + 1)) <= n) ++log2;
  const std::int64_t m = log2 / 2;
  require(m >= 1, Errc::RegimeViolation, "alternating bound needs n >= 4 d^2 so that m >= 1");
  BoundRecord r;
  r.name = "Thm3";
  r.n = static_cast<long double>(n);
  r.k = static_cast<long double>(n / 2);
  r.d = d;
  r.params = {{"C", detail::num(c)}, {"m", std::to_string(m)}};
  r.value = detail::clamp_unit(c / static_cast<long double>(m), &r.clamped);
  if (!r.clamped && c == std::floor(c)) r.exact = Rational(static_cast<long long>(c), m);
  r.asymptotic = true;
  return r;
}

}  // namespace patternlab
