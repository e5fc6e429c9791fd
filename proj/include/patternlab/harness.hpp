#pragma once

// Experiment plumbing: the line-delimited results cache, exact tables and
// source-by-source comparisons. Everything is rendered as CSV with exact
// rationals printed as "p/q".

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "patternlab/bounds.hpp"
#include "patternlab/combinatorics.hpp"
#include "patternlab/constructions.hpp"
#include "patternlab/error.hpp"
#include "patternlab/extremal.hpp"
#include "patternlab/patterns.hpp"
#include "patternlab/stochastic.hpp"

namespace patternlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

inline constexpr const char* kCacheEnvVar = "PATTERNLAB_CACHE";
inline constexpr const char* kDefaultCacheFile = "patternlab_cache.jsonl";

inline std::filesystem::path default_cache_path() {
  if (const char* env = std::getenv(kCacheEnvVar); env != nullptr && *env != '\0') return env;
  return kDefaultCacheFile;
}

namespace detail {

inline std::string format_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

inline std::string format_ld(long double x) { return BoundRecord::format_value(x); }

}  // namespace detail

/// {"n","k","pattern","f","delta_num","delta_den","witness","nodes","ms","canonical"} on one line.
/// Only exact results are cached.
inline std::string to_cache_line(const ExtremalResult& r) {
  require(r.exact, Errc::InvalidArgument, "only exact results are cached");
  const Rational delta = r.density();
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["pattern"] = r.pattern.to_string();
  j["f"] = r.f;
  j["delta_num"] = boost::multiprecision::numerator(delta).convert_to<std::uint64_t>();
  j["delta_den"] = boost::multiprecision::denominator(delta).convert_to<std::uint64_t>();
  auto witness = nlohmann::ordered_json::array();
  for (const auto& s : r.witness) witness.push_back(s.elements());
  j["witness"] = std::move(witness);
  j["nodes"] = r.nodes;
  j["ms"] = r.milliseconds;
  j["canonical"] = r.canonical_witness;
  return j.dump();
}

/// Inverse of to_cache_line; any inconsistency is a ParseError.
inline ExtremalResult from_cache_line(std::string_view line) {
  ExtremalResult r;
  try {
    const auto j = nlohmann::json::parse(line);
    r.n = j.at("n").get<int>();
    r.k = j.at("k").get<int>();
    require(r.n >= 1 && r.n <= kMaxGround && r.k >= 0 && r.k <= r.n, Errc::ParseError, "n or k out of range");
    r.pattern = Pattern::parse(j.at("pattern").get<std::string>());
    r.f = j.at("f").get<std::uint64_t>();
    for (const auto& set : j.at("witness")) {
      const auto elems = set.get<std::vector<int>>();
      for (int e : elems) require(e >= 1 && e <= r.n, Errc::ParseError, "witness element outside the ground set");
      r.witness.push_back(SubsetWord::from_elements(r.n, elems));
      require(r.witness.back().size() == r.k, Errc::ParseError, "witness set off the layer");
    }
    r.nodes = j.at("nodes").get<std::uint64_t>();
    r.milliseconds = j.at("ms").get<double>();
    r.canonical_witness = j.value("canonical", false);
    const Rational delta = make_rational(j.at("delta_num").get<std::uint64_t>(), j.at("delta_den").get<std::uint64_t>());
    require(r.witness.size() == r.f, Errc::ParseError, "witness size differs from f");
    require(delta == r.density(), Errc::ParseError, "delta does not equal f / C(n,k)");
    require(is_p_free(r.witness, r.pattern), Errc::ParseError, "witness is not P-free");
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, e.what());
  }
  r.upper_bound = r.f;
  r.exact = true;
  return r;
}

/// Results keyed by (n, k, pattern), backed by an append-only file. Corrupt lines
/// are reported to `log` and ignored; later lines override earlier ones.
class ResultCache {
 public:
  /// An empty path keeps the cache in memory only.
  explicit ResultCache(std::filesystem::path path = {}, std::ostream* log = &std::cerr)
      : path_(std::move(path)), log_(log) {
    if (path_.empty() || !std::filesystem::exists(path_)) return;
    std::ifstream in(path_);
    require(static_cast<bool>(in), Errc::InvalidArgument, "cannot read cache " + path_.string());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (detail::trim(line).empty()) continue;
      try {
        ExtremalResult r = from_cache_line(line);
        entries_[key(r.n, r.k, r.pattern)] = std::move(r);
      } catch (const Error& e) {
        ++skipped_;
        if (log_) *log_ << "warning: " << path_.string() << ':' << number << " skipped (" << e.what() << ")\n";
      }
    }
  }

  std::optional<ExtremalResult> find(int n, int k, const Pattern& p) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key(n, k, p));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const ExtremalResult& r) {
    const std::string line = to_cache_line(r);
    std::lock_guard lock(mutex_);
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::app);
      require(static_cast<bool>(out), Errc::InvalidArgument, "cache " + path_.string() + " is not writable");
      out << line << '\n';
      out.flush();
      require(static_cast<bool>(out), Errc::InvalidArgument, "write to cache " + path_.string() + " failed");
    }
    entries_[key(r.n, r.k, r.pattern)] = r;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }
  std::size_t skipped_lines() const noexcept { return skipped_; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  using Key = std::tuple<int, int, std::string>;
  static Key key(int n, int k, const Pattern& p) { return {n, k, p.to_string()}; }

  std::filesystem::path path_;
  std::ostream* log_;
  std::map<Key, ExtremalResult> entries_;
  std::size_t skipped_ = 0;
  mutable std::mutex mutex_;
};

/// Exact f(n,k,P) through the cache. `hit` reports whether the solver was skipped.
inline ExtremalResult solve_cached(int n, int k, const Pattern& p, const SearchBudget& budget, ResultCache* cache,
                                   bool* hit = nullptr, std::uint64_t vertex_cap = kDefaultVertexCap) {
  if (cache) {
    if (auto r = cache->find(n, k, p)) {
      if (hit) *hit = true;
      return *r;
    }
  }
  if (hit) *hit = false;
  ExtremalResult r = extremal_number(n, k, p, budget, vertex_cap);
  if (cache) cache->store(r);
  return r;
}

/// Which layers a table visits for a given n: "half" (floor(n/2)), "all" (0..n) or a fixed k.
struct KRule {
  enum class Kind { Half, All, Fixed };
  Kind kind = Kind::Half;
  int value = 0;

  std::vector<int> layers(int n) const {
    switch (kind) {
      case Kind::Half: return {n / 2};
      case Kind::All: {
        std::vector<int> out;
        for (int k = 0; k <= n; ++k) out.push_back(k);
        return out;
      }
      case Kind::Fixed:
        if (value <= n) return {value};
        return {};
    }
    return {};
  }

  static KRule parse(std::string_view text) {
    text = detail::trim(text);
    if (text == "half" || text == "n/2") return {Kind::Half, 0};
    if (text == "all") return {Kind::All, 0};
    int k = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    require(ec == std::errc() && ptr == text.data() + text.size() && k >= 0, Errc::ParseError,
            "k rule must be 'half', 'all' or a non-negative integer, got '" + std::string(text) + "'");
    return {Kind::Fixed, k};
  }
};

struct TableConfig {
  std::vector<int> n_values;
  KRule k_rule;
  std::vector<Pattern> patterns;
  SearchBudget budget;
  std::uint64_t vertex_cap = kDefaultVertexCap;
};

struct TableRow {
  int n = 0;
  int k = 0;
  Pattern pattern;
  std::uint64_t f = 0;
  std::uint64_t upper = 0;
  Rational delta;
  std::uint64_t nodes = 0;
  double ms = 0;
  bool exact = false;
  bool cached = false;

  static std::string csv_header() { return "n,k,pattern,f,delta,upper,nodes,ms,status"; }

  std::string csv_row() const {
    return std::to_string(n) + ',' + std::to_string(k) + ',' + pattern.to_string() + ',' + std::to_string(f) + ',' +
           to_fraction_string(delta) + ',' + std::to_string(upper) + ',' + std::to_string(nodes) + ',' +
           detail::format_ms(ms) + ',' + (exact ? "exact" : "partial");
  }
};

struct TableReport {
  std::vector<TableRow> rows;
  std::size_t solver_calls = 0;
  std::size_t cache_hits = 0;
  std::size_t partial_rows = 0;

  bool complete() const noexcept { return partial_rows == 0; }
};

/// One row per (n, k, P). Cached instances skip the solver; exhausted budgets give
/// partial rows with the incumbent and certified upper bound, and the run goes on.
/// Rows are streamed to `csv` (header first) when it is given.
inline TableReport run_exact_table(const TableConfig& cfg, ResultCache* cache, std::ostream* csv = nullptr) {
  require(!cfg.n_values.empty(), Errc::InvalidArgument, "empty n range");
  require(!cfg.patterns.empty(), Errc::InvalidArgument, "empty pattern list");
  TableReport report;
  if (csv) *csv << TableRow::csv_header() << '\n';
  for (int n : cfg.n_values) {
    for (int k : cfg.k_rule.layers(n)) {
      for (const Pattern& p : cfg.patterns) {
        TableRow row;
        row.n = n;
        row.k = k;
        row.pattern = p;
        bool hit = false;
        try {
          const ExtremalResult r = solve_cached(n, k, p, cfg.budget, cache, &hit, cfg.vertex_cap);
          row.f = r.f;
          row.upper = r.upper_bound;
          row.nodes = r.nodes;
          row.ms = r.milliseconds;
          row.exact = true;
        } catch (const BudgetExhausted& e) {
          row.f = e.partial().f;
          row.upper = e.partial().upper_bound;
          row.nodes = e.partial().nodes;
          row.ms = e.partial().milliseconds;
          ++report.partial_rows;
        }
        row.cached = hit;
        row.delta = make_rational(row.f, binomial(n, k));
        ++(hit ? report.cache_hits : report.solver_calls);
        if (csv) *csv << row.csv_row() << '\n';
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

enum class PatternKind { Interval, Alternating };

/// "IP" / "interval" or "ALT" / "alternating", case-insensitive.
inline PatternKind parse_pattern_kind(std::string_view text) {
  text = detail::trim(text);
  require(!text.empty(), Errc::InvalidArgument, "empty pattern kind");
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "ip" || lower == "interval") return PatternKind::Interval;
  if (lower == "alt" || lower == "alternating") return PatternKind::Alternating;
  fail(Errc::InvalidArgument, "unknown pattern kind '" + std::string(text) + "'; expected IP or ALT");
}

inline Pattern pattern_of_kind(PatternKind kind, int d) {
  return kind == PatternKind::Interval ? interval_pattern(d) : alternating_pattern(d);
}

struct ComparisonRow {
  std::string source;  // construction name, "Exact" or a bound name
  std::string role;    // construction | exact | bound
  std::optional<BigInt> size;
  std::optional<Rational> density;
  long double value = 0;
  bool asymptotic = false;
  bool valid = true;
  std::string status;  // free | unchecked | exact | partial | ok | invalid | error:<code>

  bool usable() const { return status == "free" || status == "unchecked" || status == "exact" || status == "ok"; }
};

struct ComparisonReport {
  int n = 0;
  int k = 0;
  int d = 0;
  Pattern pattern;
  std::vector<ComparisonRow> rows;
  bool partial = false;

  static std::string csv_header() { return "source,role,n,k,d,pattern,size,density,value,asymptotic,status"; }

  void write_csv(std::ostream& os) const {
    os << csv_header() << '\n';
    for (const auto& r : rows) {
      os << r.source << ',' << r.role << ',' << n << ',' << k << ',' << d << ',' << pattern.to_string() << ','
         << (r.size ? r.size->str() : std::string()) << ',' << (r.density ? to_fraction_string(*r.density) : "")
         << ',' << detail::format_ld(r.value) << ',' << (r.asymptotic ? 1 : 0) << ',' << r.status << '\n';
    }
  }

  /// construction density <= exact density <= every usable non-asymptotic bound,
  /// for every pair of rows where both sides are present.
  bool consistent() const {
    const ComparisonRow* exact = nullptr;
    for (const auto& r : rows)
      if (r.role == "exact" && r.status == "exact") exact = &r;
    auto at_most = [](const ComparisonRow& lo, const ComparisonRow& hi) {
      if (lo.density && hi.density) return *lo.density <= *hi.density;
      return lo.value <= hi.value * (1 + 1e-15L);
    };
    for (const auto& r : rows) {
      if (!r.usable()) continue;
      if (r.role == "construction") {
        if (exact && !at_most(r, *exact)) return false;
        for (const auto& b : rows)
          if (b.role == "bound" && b.usable() && !b.asymptotic && !at_most(r, b)) return false;
      }
      if (r.role == "bound" && exact && !r.asymptotic && !at_most(*exact, r)) return false;
    }
    return true;
  }
};

namespace detail {

inline ComparisonRow error_row(std::string source, std::string role, const Error& e, bool asymptotic = false) {
  ComparisonRow r;
  r.source = std::move(source);
  r.role = std::move(role);
  r.asymptotic = asymptotic;
  r.valid = false;
  r.status = "error:" + std::string(to_string(e.code()));
  return r;
}

inline ComparisonRow bound_row(const BoundRecord& b) {
  ComparisonRow r;
  r.source = b.name;
  r.role = "bound";
  r.density = b.exact;
  r.value = b.value;
  r.asymptotic = b.asymptotic;
  r.valid = b.valid;
  r.status = b.valid ? "ok" : "invalid";
  return r;
}

}  // namespace detail

/// Joins the constructions, the exact optimum and the upper bounds on the middle
/// layer k = n/2 for IP(d) or ALT(d). A failing source gives an error row.
inline ComparisonReport run_comparison(int n, int d, PatternKind kind, const SearchBudget& budget = {},
                                       ResultCache* cache = nullptr, int freeness_check_limit = 16) {
  require(n >= 2 && n % 2 == 0 && n <= kMaxGround, Errc::InvalidArgument, "comparisons need an even n in [2, 64]");
  require(d >= 1 && 2 * d <= n, Errc::InvalidArgument, "comparisons need 1 <= d <= n/2");
  ComparisonReport rep;
  rep.n = n;
  rep.k = n / 2;
  rep.d = d;
  rep.pattern = pattern_of_kind(kind, d);
  const BigInt layer_size = binomial(n, rep.k);

  if (kind == PatternKind::Interval) {
    std::vector<std::pair<std::string, std::function<FamilySpec()>>> sources = {
        {"SumResidue", [&] { return best_sum_residue(n, d); }},
        {"SumWindow", [&] { return best_sum_window(n, d); }},
        {"BoundedDiscrepancy", [&] { return FamilySpec::bounded_discrepancy(n, d); }},
    };
    if (d == 2) sources.emplace_back("Transversal", [&] { return FamilySpec::transversal(n, n / 2); });
    for (const auto& [name, make] : sources) {
      try {
        const FamilySpec spec = make();
        ComparisonRow r;
        r.source = name;
        r.role = "construction";
        r.size = spec.count();
        r.density = make_rational(*r.size, layer_size);
        r.value = to_long_double(*r.density);
        r.status = "unchecked";
        if (n <= freeness_check_limit) r.status = is_p_free(spec.materialize(), rep.pattern) ? "free" : "not_free";
        rep.rows.push_back(std::move(r));
      } catch (const Error& e) {
        rep.rows.push_back(detail::error_row(name, "construction", e));
      }
    }
  }

  try {
    const ExtremalResult res = solve_cached(n, rep.k, rep.pattern, budget, cache);
    ComparisonRow r;
    r.source = "Exact";
    r.role = "exact";
    r.size = res.f;
    r.density = res.density();
    r.value = to_long_double(*r.density);
    r.status = "exact";
    rep.rows.push_back(std::move(r));
  } catch (const BudgetExhausted& e) {
    ComparisonRow r;
    r.source = "Exact";
    r.role = "exact";
    r.size = e.partial().f;
    r.density = e.partial().density();
    r.value = to_long_double(*r.density);
    r.status = "partial";
    rep.rows.push_back(std::move(r));
    rep.partial = true;
  } catch (const Error& e) {
    rep.rows.push_back(detail::error_row("Exact", "exact", e));
    rep.partial = true;
  }

  const auto k = static_cast<long double>(rep.k);
  if (d == 1) {
    ComparisonRow r;
    r.source = "Base_d1";
    r.role = "bound";
    r.density = base_delta1(static_cast<std::uint64_t>(rep.k));
    r.value = to_long_double(*r.density);
    r.status = "ok";
    rep.rows.push_back(std::move(r));
  }
  auto add_bound = [&](const std::string& name, bool asymptotic, auto&& make) {
    try {
      rep.rows.push_back(detail::bound_row(make()));
    } catch (const Error& e) {
      rep.rows.push_back(detail::error_row(name, "bound", e, asymptotic));
    }
  };
  add_bound("Recursive", false, [&] { return recursive_delta_bound(k, rep.pattern); });
  add_bound("Thm1", false, [&] { return thm1_bound(k, d); });
  if (kind == PatternKind::Interval)
    add_bound("Thm2", true, [&] { return thm2_bound(n, d); });
  else
    add_bound("Thm3", true, [&] { return thm3_bound(n, d); });
  return rep;
}

/// One CSV row per summary statistic of an interval process run.
inline void write_process_csv(std::ostream& os, const IntervalProcessConfig& cfg, const ProcessSummary& s,
                              std::uint64_t seed) {
  os << "statistic,value,radius,exact\n";
  os << "n," << cfg.n << ",,\n";
  os << "d," << cfg.d << ",,\n";
  os << "m," << cfg.m() << ",,\n";
  os << "seed," << seed << ",,\n";
  os << "trials," << s.trials << ",,\n";
  os << "max_indicator_sum," << s.max_indicator_sum << ",,\n";
  os << "trials_with_member," << s.hits << ",,\n";
  os << "j_nonempty," << detail::format_ld(s.j_nonempty.mean) << ',' << detail::format_ld(s.j_nonempty.radius)
     << ",\n";
  for (std::size_t i = 0; i < s.membership.size(); ++i) {
    os << "p_in_j_" << i + 1 << ',' << detail::format_ld(s.membership[i].mean) << ','
       << detail::format_ld(s.membership[i].radius) << ',' << to_fraction_string(s.exact_membership[i]) << '\n';
  }
}

}  // namespace patternlab
