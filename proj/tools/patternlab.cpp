// patternlab: exact extremal numbers, constructions, bounds, walk counts and
// interval-process simulations from the command line. Output is CSV.
//
// Exit codes: 0 success, 2 partial (a search budget ran out), 1 usage or config error.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "patternlab/patternlab.hpp"

namespace pl = patternlab;

namespace {

struct Globals {
  std::string cache;
  bool no_cache = false;
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t budget_nodes = pl::SearchBudget{}.max_nodes;
  double budget_secs = pl::SearchBudget{}.max_seconds;
};

pl::SearchBudget budget_of(const Globals& g) {
  pl::SearchBudget b;
  b.max_nodes = g.budget_nodes;
  b.max_seconds = g.budget_secs;
  return b;
}

std::unique_ptr<pl::ResultCache> open_cache(const Globals& g) {
  if (g.no_cache) return std::make_unique<pl::ResultCache>();
  return std::make_unique<pl::ResultCache>(g.cache.empty() ? pl::default_cache_path() : std::filesystem::path(g.cache));
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      pl::require(static_cast<bool>(file_), pl::Errc::InvalidArgument, "cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct ConstructArgs {
  std::string name;
  int n = 0;
  int k = 0;
  int d = 1;
  int m = 1;
  int variant = 1;
  std::optional<std::int64_t> residue;
  std::optional<std::int64_t> center;
  std::string s;
  std::string t;
};

pl::FamilySpec make_spec(const ConstructArgs& a) {
  if (a.name == "parity") return pl::FamilySpec::parity(a.n, a.m, a.variant);
  if (a.name == "transversal") return pl::FamilySpec::transversal(a.n, a.k);
  if (a.name == "sum_residue")
    return a.residue ? pl::FamilySpec::sum_residue(a.n, a.d, *a.residue) : pl::best_sum_residue(a.n, a.d);
  if (a.name == "sum_window")
    return a.center ? pl::FamilySpec::sum_window(a.n, a.d, *a.center) : pl::best_sum_window(a.n, a.d);
  if (a.name == "bounded_discrepancy") return pl::FamilySpec::bounded_discrepancy(a.n, a.d);
  if (a.name == "cts") return pl::FamilySpec::cts(pl::SubsetWord::parse(a.s, a.n), pl::SubsetWord::parse(a.t, a.n));
  pl::fail(pl::Errc::InvalidArgument, "unknown construction '" + a.name +
                                          "'; expected parity, transversal, sum_residue, sum_window, "
                                          "bounded_discrepancy or cts");
}

// The pattern each family is built to avoid, when there is a single one.
std::optional<pl::Pattern> claimed_pattern(const pl::FamilySpec& spec) {
  switch (spec.kind()) {
    case pl::FamilyKind::Transversal: return pl::interval_pattern(2);
    case pl::FamilyKind::SumResidue:
    case pl::FamilyKind::SumWindow:
    case pl::FamilyKind::BoundedDiscrepancy: return pl::interval_pattern(spec.d());
    default: return std::nullopt;
  }
}

int run_exact(const Globals& g, int n, int k, const std::string& pattern, const std::string& witness_path) {
  auto cache = open_cache(g);
  pl::TableConfig cfg;
  cfg.n_values = {n};
  cfg.k_rule = {pl::KRule::Kind::Fixed, k};
  cfg.patterns = {pl::Pattern::parse(pattern)};
  cfg.budget = budget_of(g);
  pl::require(k >= 0 && k <= n, pl::Errc::InvalidArgument, "k must lie in [0, n]");
  Sink sink(g.out);
  const auto report = pl::run_exact_table(cfg, cache.get(), &sink.stream());
  if (!witness_path.empty() && report.complete()) {
    const auto r = pl::solve_cached(n, k, cfg.patterns.front(), cfg.budget, cache.get());
    std::ofstream os(witness_path);
    pl::require(static_cast<bool>(os), pl::Errc::InvalidArgument, "cannot open " + witness_path);
    os << "# family exact n=" << n << " k=" << k << " pattern=" << cfg.patterns.front().to_string() << " size=" << r.f << '\n';
    for (const auto& s : r.witness) os << s.to_string() << '\n';
  }
  return report.complete() ? pl::kExitOk : pl::kExitPartial;
}

int run_construct(const Globals& g, const ConstructArgs& a, const std::string& pattern, const std::string& family_out,
                  std::uint64_t check_limit) {
  const pl::FamilySpec spec = make_spec(a);
  const pl::BigInt size = spec.count();
  std::optional<pl::Pattern> p = pattern.empty() ? claimed_pattern(spec) : pl::Pattern::parse(pattern);
  std::string free = "n/a";
  std::optional<pl::Family> family;
  if (size <= check_limit || !family_out.empty()) family = spec.materialize();
  if (p) free = family ? (pl::is_p_free(*family, *p) ? "1" : "0") : "unchecked";
  Sink sink(g.out);
  auto& os = sink.stream();
  os << "construction,n,k,d,size,density,pattern,free\n";
  os << pl::to_string(spec.kind()) << ',' << spec.n() << ',' << spec.layer() << ',' << spec.d() << ',' << size.str()
     << ',' << pl::to_fraction_string(pl::make_rational(size, pl::binomial(spec.n(), spec.layer()))) << ','
     << (p ? p->to_string() : "") << ',' << free << '\n';
  if (!family_out.empty()) {
    std::ofstream fs(family_out);
    pl::require(static_cast<bool>(fs), pl::Errc::InvalidArgument, "cannot open " + family_out);
    pl::write_family(fs, spec, *family);
  }
  return free == "0" ? pl::kExitUsage : pl::kExitOk;
}

int run_bound(const Globals& g, long double k, int d, const std::string& pattern, std::optional<std::int64_t> n,
              bool optimize, bool trace) {
  std::optional<pl::Pattern> p;
  if (!pattern.empty()) {
    p = pl::Pattern::parse(pattern);
    d = p->d();
  }
  pl::require(d >= 1, pl::Errc::InvalidArgument, "bound needs --d or --pattern");
  std::vector<pl::BoundRecord> records;
  if (k >= 1) {
    records.push_back(pl::thm1_bound(k, d));
    if (p) records.push_back(pl::recursive_delta_bound(k, *p, optimize));
    if (d == 1 && k < 1e18L) {
      pl::BoundRecord base;
      base.name = "Base_d1";
      base.k = std::floor(k);
      base.d = 1;
      base.exact = pl::base_delta1(static_cast<std::uint64_t>(base.k));
      base.value = pl::to_long_double(*base.exact);
      records.push_back(base);
    }
  }
  if (n) {
    for (auto make : {+[](std::int64_t nn, int dd) { return pl::thm2_bound(nn, dd); },
                      +[](std::int64_t nn, int dd) { return pl::thm3_bound(nn, dd); }}) {
      try {
        records.push_back(make(*n, d));
      } catch (const pl::Error& e) {
        std::cerr << "note: " << e.what() << '\n';
      }
    }
  }
  pl::require(!records.empty(), pl::Errc::InvalidArgument, "bound needs --k >= 1 or --n");
  Sink sink(g.out);
  auto& os = sink.stream();
  os << pl::BoundRecord::csv_header() << '\n';
  for (const auto& r : records) os << r.csv_row() << '\n';
  if (trace) {
    for (const auto& r : records)
      for (const auto& s : r.trace)
        std::cerr << r.name << " depth=" << s.depth << ' ' << s.rule << " k=" << pl::BoundRecord::format_count(s.k)
                  << " P=" << s.pattern.to_string() << ' ' << s.params << " value=" << pl::BoundRecord::format_value(s.value)
                  << '\n';
  }
  return pl::kExitOk;
}

int run_walks(const Globals& g, const std::string& mode, const pl::WalkSpec& spec, int h, int bound) {
  Sink sink(g.out);
  auto& os = sink.stream();
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  if (mode == "count") {
    os << "length,start,end,lo,hi,count\n";
    os << spec.length << ',' << spec.start << ',' << spec.end << ',' << opt(spec.lo) << ',' << opt(spec.hi) << ','
       << pl::count_walks(spec).str() << '\n';
  } else if (mode == "hitting") {
    os << "length,start,end,lo,hi,h,count\n";
    os << spec.length << ',' << spec.start << ',' << spec.end << ',' << opt(spec.lo) << ',' << opt(spec.hi) << ','
       << h << ',' << pl::count_walks_hitting(spec, h).str() << '\n';
  } else {
    os << "length,start,end,bound,probability\n";
    os << spec.length << ',' << spec.start << ',' << spec.end << ',' << bound << ','
       << pl::to_fraction_string(pl::segment_excursion_probability(spec.length, spec.start, spec.end, bound)) << '\n';
  }
  return pl::kExitOk;
}

int run_simulate(const Globals& g, int n, int d, std::uint64_t trials, const std::string& construction,
                 const std::string& family_path) {
  const pl::IntervalProcessConfig cfg(n, d);
  pl::Family family;
  if (!family_path.empty()) {
    std::ifstream is(family_path);
    pl::require(static_cast<bool>(is), pl::Errc::InvalidArgument, "cannot read " + family_path);
    family = pl::read_family(is, n).members;
  } else if (construction != "none") {
    ConstructArgs a;
    a.name = construction;
    a.n = n;
    a.d = d;
    family = make_spec(a).materialize();
  }
  const auto summary = pl::run_interval_process(cfg, family, trials, g.seed);
  Sink sink(g.out);
  pl::write_process_csv(sink.stream(), cfg, summary, g.seed);
  return pl::kExitOk;
}

std::vector<int> expand_range(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const auto& item : items) {
    // "lo:hi" or "lo:hi:step", inclusive.
    std::vector<int> parts;
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ':')) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      pl::require(ec == std::errc() && ptr == part.data() + part.size() && !part.empty(), pl::Errc::ParseError,
                  "bad n value '" + item + "'");
      parts.push_back(v);
    }
    pl::require(!parts.empty() && parts.size() <= 3, pl::Errc::ParseError, "bad n range '" + item + "'");
    if (parts.size() == 1) {
      out.push_back(parts[0]);
      continue;
    }
    const int step = parts.size() == 3 ? parts[2] : 1;
    pl::require(step >= 1 && parts[0] <= parts[1], pl::Errc::ParseError, "bad n range '" + item + "'");
    for (int v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
  }
  return out;
}

int run_table(const Globals& g, const std::vector<std::string>& n_items, const std::string& k_rule,
              const std::vector<std::string>& patterns) {
  pl::TableConfig cfg;
  cfg.n_values = expand_range(n_items);
  cfg.k_rule = pl::KRule::parse(k_rule);
  for (const auto& p : patterns) cfg.patterns.push_back(pl::Pattern::parse(p));
  cfg.budget = budget_of(g);
  auto cache = open_cache(g);
  Sink sink(g.out);
  const auto report = pl::run_exact_table(cfg, cache.get(), &sink.stream());
  std::cerr << "solver calls " << report.solver_calls << ", cache hits " << report.cache_hits << ", partial rows "
            << report.partial_rows << '\n';
  return report.complete() ? pl::kExitOk : pl::kExitPartial;
}

int run_compare(const Globals& g, int n, int d, const std::string& kind) {
  const auto parsed = pl::parse_pattern_kind(kind);
  auto cache = open_cache(g);
  const auto report = pl::run_comparison(n, d, parsed, budget_of(g), cache.get());
  Sink sink(g.out);
  report.write_csv(sink.stream());
  if (!report.consistent()) std::cerr << "warning: comparison rows are not ordered as expected\n";
  return report.partial ? pl::kExitPartial : pl::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patternlab: pattern-free set families"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--cache", g.cache, "results cache file (default $PATTERNLAB_CACHE or ./patternlab_cache.jsonl)");
  app.add_flag("--no-cache", g.no_cache, "keep results in memory only");
  app.add_option("--out", g.out, "write CSV here instead of stdout");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--budget-nodes", g.budget_nodes, "search node budget per instance");
  app.add_option("--budget-secs", g.budget_secs, "search time budget per instance");

  int n = 0;
  int k = 0;
  int d = 0;
  std::string pattern;
  std::string witness;
  auto* exact = app.add_subcommand("exact", "exact f(n,k,P) as one table row");
  exact->add_option("--n", n)->required();
  exact->add_option("--k", k)->required();
  exact->add_option("--pattern", pattern)->required();
  exact->add_option("--witness", witness, "write the optimal family here");

  ConstructArgs ca;
  std::string family_out;
  std::uint64_t check_limit = 1u << 16;
  auto* construct = app.add_subcommand("construct", "size and freeness of an explicit family");
  construct->add_option("--construction", ca.name)->required();
  construct->add_option("--n", ca.n)->required();
  construct->add_option("--k", ca.k);
  construct->add_option("--d", ca.d);
  construct->add_option("--m", ca.m);
  construct->add_option("--variant", ca.variant);
  construct->add_option("--residue", ca.residue, "default: the largest residue class");
  construct->add_option("--center", ca.center, "default: the largest window");
  construct->add_option("--s", ca.s, "S for cts, e.g. 1,2");
  construct->add_option("--t", ca.t, "T for cts");
  construct->add_option("--pattern", pattern, "pattern to check instead of the claimed one");
  construct->add_option("--family-out", family_out, "write the members here");
  construct->add_option("--check-limit", check_limit, "largest family checked for freeness");

  long double bound_k = 0;
  std::optional<std::int64_t> bound_n;
  bool optimize = false;
  bool trace = false;
  auto* bound = app.add_subcommand("bound", "upper bounds as BoundRecord CSV rows");
  bound->add_option("--k", bound_k);
  bound->add_option("--d", d);
  bound->add_option("--pattern", pattern);
  bound->add_option("--n", bound_n, "ground set size for the interval and alternating bounds");
  bound->add_flag("--optimize", optimize, "search the recursion parameters on a grid");
  bound->add_flag("--trace", trace, "print the recursion trace to stderr");

  pl::WalkSpec ws;
  int h = 0;
  int excursion_bound = 0;
  auto* walks = app.add_subcommand("walks", "lattice path counts");
  walks->require_subcommand(1);
  auto add_walk_flags = [&](CLI::App* sub) {
    sub->add_option("--length,--n", ws.length)->required();
    sub->add_option("--start", ws.start);
    sub->add_option("--end", ws.end);
  };
  auto* walks_count = walks->add_subcommand("count", "walks with steps +-1, optionally confined to [lo, hi]");
  add_walk_flags(walks_count);
  walks_count->add_option("--lo", ws.lo);
  walks_count->add_option("--hi", ws.hi);
  auto* walks_hit = walks->add_subcommand("hitting", "walks that touch level h");
  add_walk_flags(walks_hit);
  walks_hit->add_option("--lo", ws.lo);
  walks_hit->add_option("--hi", ws.hi);
  walks_hit->add_option("--level", h, "the level h")->required();
  auto* walks_exc = walks->add_subcommand("excursion", "probability a uniform walk stays in [-bound, bound]");
  add_walk_flags(walks_exc);
  walks_exc->add_option("--bound", excursion_bound)->required();

  std::uint64_t trials = 10'000;
  std::string source = "sum_residue";
  std::string family_file;
  auto* simulate = app.add_subcommand("simulate", "interval process on an IP(d)-free family");
  simulate->add_option("--n", n)->required();
  simulate->add_option("--d", d)->required();
  simulate->add_option("--trials", trials);
  simulate->add_option("--construction", source, "sum_residue, sum_window, bounded_discrepancy or none");
  simulate->add_option("--family", family_file, "family file instead of a construction");

  std::vector<std::string> n_items;
  std::string k_rule = "half";
  std::vector<std::string> patterns;
  auto* table = app.add_subcommand("table", "exact values over a grid, through the cache");
  table->add_option("--n", n_items, "values or ranges lo:hi[:step]")->required();
  table->add_option("--k", k_rule, "half, all or a fixed k");
  table->add_option("--pattern", patterns)->required();

  std::string kind;
  auto* compare = app.add_subcommand("compare", "constructions, exact value and bounds side by side");
  compare->add_option("--n", n)->required();
  compare->add_option("--d", d)->required();
  compare->add_option("--kind", kind, "IP or ALT")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pl::kExitOk : pl::kExitUsage;
  }

  try {
    if (*exact) return run_exact(g, n, k, pattern, witness);
    if (*construct) return run_construct(g, ca, pattern, family_out, check_limit);
    if (*bound) return run_bound(g, bound_k, d, pattern, bound_n, optimize, trace);
    if (*walks_count) return run_walks(g, "count", ws, h, excursion_bound);
    if (*walks_hit) return run_walks(g, "hitting", ws, h, excursion_bound);
    if (*walks_exc) return run_walks(g, "excursion", ws, h, excursion_bound);
    if (*simulate) return run_simulate(g, n, d, trials, source, family_file);
    if (*table) return run_table(g, n_items, k_rule, patterns);
    if (*compare) return run_compare(g, n, d, kind);
  } catch (const pl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pl::kExitUsage;
  }
  return pl::kExitUsage;
}
