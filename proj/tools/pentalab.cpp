// pentalab command-line front end.
//
// Exit codes: 0 pass, 1 check failure, 2 usage error, 3 degeneracy.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "pentalab/pentalab.hpp"

namespace fs = std::filesystem;
using namespace pentalab;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kDegenerate = 3 };

struct Common {
  std::string format = "text";
  std::string out;
};

void add_common(CLI::App* app, Common& c, std::vector<std::string> formats) {
  formats.push_back("json");
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats));
  app->add_option("--out", c.out, "output file (default stdout)");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw UsageError("cannot write " + p.string());
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// "1-5", "1,2,9" or a mix.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (auto part : detail::split(text, ',')) {
    const auto dash = part.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(static_cast<std::uint64_t>(detail::parse_long(part)));
      continue;
    }
    const long lo = detail::parse_long(part.substr(0, dash)), hi = detail::parse_long(part.substr(dash + 1));
    if (lo < 0 || hi < lo) throw ParseError("bad seed range '" + std::string(part) + "'");
    for (long s = lo; s <= hi; ++s) out.push_back(static_cast<std::uint64_t>(s));
  }
  if (out.empty()) throw ParseError("no seeds");
  return out;
}

// ---------------------------------------------------------------------------
// gen / apply

struct GenArgs {
  Common common;
  std::size_t d = 2, n = 11;
  std::uint64_t seed = 1;
  long lo = 1, hi = 10;
};

int run_gen(const GenArgs& a) {
  emit(a.common, dump(to_json(random_twisted(a.d, a.n, {a.lo, a.hi}, a.seed))));
  return kPass;
}

struct ApplyArgs {
  Common common;
  std::string map, in;
  int steps = 1;
};

int run_apply(const ApplyArgs& a) {
  TwistedPolygon p = polygon_from_json(Json::parse(read_file(a.in)));
  const MapSpec spec = parse_map_spec(a.map, p.dim());
  for (int i = 0; i < a.steps; ++i) p = apply_polygon(spec, p);
  emit(a.common, dump(to_json(p)));
  return kPass;
}

// ---------------------------------------------------------------------------
// trace

struct TraceArgs {
  Common common;
  std::string map;
  std::size_t d = 2, n = 11, budget = 2'000'000;
  int iters = 10;
  std::uint64_t seed = 1;
  long lo = 1, hi = 10;
  std::string csv, json;
  bool no_timing = false;
};

int run_trace_cmd(const TraceArgs& a) {
  ExperimentConfig cfg;
  cfg.d = a.d;
  cfg.spec = parse_map_spec(a.map, a.d);
  cfg.n = a.n;
  cfg.iterations = a.iters;
  cfg.seed = a.seed;
  cfg.coord_range = {a.lo, a.hi};
  cfg.digit_budget = a.budget;
  const HeightTrace trace = run_trace(cfg);
  const Classification c = classify(trace);
  const bool timing = !a.no_timing;

  Json j{{"map", a.map}, {"d", a.d}, {"n", a.n}, {"seed", a.seed},
         {"trace", to_json(trace, timing)}, {"classification", to_json(c)}};
  if (!a.csv.empty()) write_file(a.csv, trace_csv(trace, timing));
  if (!a.json.empty()) write_file(a.json, dump(j));
  if (a.common.format == "json") {
    emit(a.common, dump(j));
  } else if (a.common.format == "csv") {
    emit(a.common, trace_csv(trace, timing));
  } else {
    std::ostringstream s;
    s << trace_csv(trace, timing);
    s << "# label " << to_string(c.label) << " sigma " << format_double(c.sigma, "%.4f") << " r2_exp "
      << format_double(c.r2_exp, "%.4f") << " alpha " << format_double(c.alpha, "%.4f") << " r2_poly "
      << format_double(c.r2_poly, "%.4f") << (trace.truncated ? " truncated" : "") << '\n';
    emit(a.common, s.str());
  }
  return kPass;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  Common common;
  std::string kind, map, i, j;
  std::size_t d = 3, n = 11;
  int trials = 50;
  std::uint64_t seed = 1;
  mpfr_prec_t precision = 512;
  double tol = 1e-20;
};

struct Tally {
  int passed = 0, total = 0;
  std::map<std::string, std::set<long>> shifts;
  std::vector<std::string> failures;
  Json cases = Json::array();

  void add(bool ok, const std::string& what) {
    ++total;
    if (ok) ++passed;
    else if (failures.size() < 20) failures.push_back(what);
  }
};

/// Seed of trial t; reseeds step by one, so trials stay disjoint.
std::uint64_t trial_seed(std::uint64_t base, int t) { return base * 1'000'003 + static_cast<std::uint64_t>(t) * 64; }

Tally check_duality(const CheckArgs& a) {
  Tally tally;
  std::mt19937_64 rng(a.seed);
  for (int t = 0; t < a.trials; ++t) {
    Generalized g = a.i.empty() ? random_generalized(a.d, rng)
                                : Generalized{detail::parse_list(a.i), detail::parse_list(a.j)};
    check_spec(g, a.d);
    const TrialOutcome o = duality_trial(g, trial_seed(a.seed, t));
    tally.add(o.pass, format_map_spec(g));
    if (o.shift) tally.shifts[format_map_spec(g)].insert(*o.shift);
  }
  return tally;
}

Tally check_shift(const CheckArgs& a) {
  Tally tally;
  const MapSpec spec = parse_map_spec(a.map.empty() ? "T:1,2/2,1" : a.map, a.d);
  const auto* g = std::get_if<Generalized>(&spec);
  if (!g) throw UsageError("check shift needs a generalized map");
  for (int t = 0; t < a.trials; ++t) {
    const TrialOutcome o = shift_map_trial(*g, trial_seed(a.seed, t));
    tally.add(o.pass, o.detail);
    if (o.shift) tally.shifts[format_map_spec(*g)].insert(*o.shift);
  }
  return tally;
}

Tally check_universal(const CheckArgs& a) {
  Tally tally;
  std::mt19937_64 rng(a.seed);
  for (int t = 0; t < a.trials; ++t) {
    const std::size_t d = a.d == 0 ? 2 + static_cast<std::size_t>(t % 2) : a.d;
    Universal u = a.i.empty() ? random_universal(d, rng)
                              : Universal{detail::parse_rows(a.i), detail::parse_rows(a.j)};
    const TrialOutcome o = universal_duality_trial(u, trial_seed(a.seed, t));
    tally.add(o.pass, o.detail);
  }
  return tally;
}

Tally check_conjugation(const CheckArgs& a) {
  Tally tally;
  std::mt19937_64 rng(a.seed);
  for (int t = 0; t < a.trials; ++t) {
    const IntMatrix j = random_skew_symmetric(a.d, rng);
    const IntMatrix i = random_distinct_rows(a.d, rng, {-3, 3});
    const TrialOutcome o = conjugation_trial(i, j, trial_seed(a.seed, t));
    tally.add(o.pass, o.detail);
  }
  return tally;
}

Tally check_corrugated(const CheckArgs& a) {
  Tally tally;
  for (int t = 0; t < a.trials; ++t) {
    const CorrugatedOutcome o = corrugated_trial(a.d, trial_seed(a.seed, t));
    tally.add(o.pass, "seed " + std::to_string(o.seed_used));
    if (o.shift_t1) tally.shifts["T_cor->T_1"].insert(*o.shift_t1);
    if (o.shift_t2) tally.shifts["T_cor->T_" + std::to_string(a.d - 1)].insert(*o.shift_t2);
    if (o.shift_t1_t2) tally.shifts["T_1->T_" + std::to_string(a.d - 1)].insert(*o.shift_t1_t2);
  }
  return tally;
}

Tally check_monodromy(const CheckArgs& a) {
  Tally tally;
  const MapSpec spec = parse_map_spec(a.map.empty() ? "T_sh" : a.map, a.d);
  for (int t = 0; t < a.trials; ++t) {
    const TrialOutcome o = monodromy_trial(spec, a.d, a.n, trial_seed(a.seed, t));
    tally.add(o.pass, o.detail);
  }
  return tally;
}

Tally check_lax(const CheckArgs& a) {
  Tally tally;
  const MapSpec spec = parse_map_spec(a.map.empty() ? "T_sh" : a.map, a.d);
  LaxConfig cfg;
  cfg.precision = a.precision;
  cfg.conservation_tol = a.tol;
  const int trials = a.trials;
  for (int t = 0; t < trials; ++t) {
    const LaxOutcome o = lax_trial(spec, a.d, a.n, trial_seed(a.seed, t), cfg);
    tally.add(o.report.pass, o.report.variant + " seed " + std::to_string(o.seed_used) + " log10 dev " +
                                 format_double(o.report.log10_max_rel_dev, "%.1f"));
    Json c = to_json(o.report);
    c["seed_used"] = o.seed_used;
    tally.cases.push_back(std::move(c));
  }
  return tally;
}

int run_check(CheckArgs a) {
  Tally tally;
  if (a.kind == "lax" && a.trials == 50) a.trials = 1;
  if (a.kind == "duality") tally = check_duality(a);
  else if (a.kind == "shift") tally = check_shift(a);
  else if (a.kind == "universal-duality") tally = check_universal(a);
  else if (a.kind == "conjugation") tally = check_conjugation(a);
  else if (a.kind == "corrugated") tally = check_corrugated(a);
  else if (a.kind == "monodromy") tally = check_monodromy(a);
  else if (a.kind == "lax") tally = check_lax(a);
  const bool pass = tally.passed == tally.total;

  if (a.common.format == "json") {
    Json shifts = Json::object();
    for (const auto& [k, v] : tally.shifts) shifts[k] = Json(std::vector<long>(v.begin(), v.end()));
    Json j{{"kind", a.kind}, {"d", a.d},          {"trials", tally.total}, {"passed", tally.passed},
           {"pass", pass},   {"shifts", shifts}, {"failures", tally.failures}};
    if (!tally.cases.empty()) j["cases"] = tally.cases;
    emit(a.common, dump(j));
  } else {
    std::ostringstream s;
    s << a.kind << ": " << tally.passed << "/" << tally.total << (pass ? " pass" : " FAIL") << '\n';
    for (const auto& [k, v] : tally.shifts) {
      s << "  shift " << k << ":";
      for (long x : v) s << ' ' << x;
      s << '\n';
    }
    for (const auto& c : tally.cases)
      s << "  " << c["variant"].get<std::string>() << " log10 max rel dev "
        << format_double(c["log10_max_rel_dev"].get<double>(), "%.1f") << '\n';
    for (const auto& f : tally.failures) s << "  failed: " << f << '\n';
    emit(a.common, s.str());
  }
  return pass ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// tables

struct TablesArgs {
  Common common;
  std::string seeds = "1-5", rows, out_dir;
  unsigned jobs = 1;
  std::size_t budget = 2'000'000, n = 11;
  int iters_2d = 10, iters_3d = 8;
  bool no_timing = false;
};

std::string row_line(const RowReport& r) {
  std::ostringstream s;
  s << r.row.id << '\t' << r.row.spec << "\texpected " << to_string(r.row.expected) << "\tobserved "
    << to_string(r.observed) << "\tmedian log10H " << format_double(r.median_final_log10_height, "%.1f")
    << "\ttruncated " << r.truncated_count << '/' << r.seeds.size() << (r.matched() ? "\tok" : "\tMISMATCH");
  return s.str();
}

int run_tables(const TablesArgs& a) {
  TableOptions opt;
  opt.seeds = parse_seeds(a.seeds);
  opt.rows = a.rows;
  opt.jobs = a.jobs;
  opt.digit_budget = a.budget;
  opt.n = a.n;
  opt.iterations_2d = a.iters_2d;
  opt.iterations_3d = a.iters_3d;
  const bool text = a.common.format != "json";
  const TableReport report = reproduce_tables(opt, [&](const RowReport& r) {
    if (text) std::cerr << row_line(r) << std::endl;
  });

  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    for (const auto& r : report.rows)
      for (const auto& s : r.seeds)
        if (s.trace) {
          std::string id = r.row.id;
          std::replace(id.begin(), id.end(), ':', '_');
          write_file(fs::path(a.out_dir) / (id + "_seed" + std::to_string(s.seed) + ".csv"),
                     trace_csv(*s.trace, !a.no_timing));
        }
    write_file(fs::path(a.out_dir) / "report.json", dump(to_json(report)));
  }
  if (text) {
    std::ostringstream s;
    for (const auto& r : report.rows) s << row_line(r) << '\n';
    s << (report.all_matched() ? "all rows matched\n" : "some rows did not match\n");
    emit(a.common, s.str());
  } else {
    emit(a.common, dump(to_json(report)));
  }
  return report.all_matched() ? kPass : kFail;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("PENTALAB_JOBS")) {
    try {
      const long j = detail::parse_long(env);
      if (j > 0) return static_cast<unsigned>(j);
    } catch (const Error&) {
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pentalab: exact experiments with pentagram maps"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "random twisted polygon as JSON");
  add_common(g, gen.common, {"text"});
  g->add_option("--d", gen.d)->check(CLI::Range(2, 16));
  g->add_option("--n", gen.n);
  g->add_option("--seed", gen.seed);
  g->add_option("--lo", gen.lo);
  g->add_option("--hi", gen.hi);

  ApplyArgs apply;
  auto* ap = app.add_subcommand("apply", "apply a map to a polygon JSON file");
  add_common(ap, apply.common, {"text"});
  ap->add_option("--map", apply.map)->required();
  ap->add_option("--in", apply.in)->required();
  ap->add_option("--steps", apply.steps)->check(CLI::NonNegativeNumber);

  TraceArgs trace;
  auto* tr = app.add_subcommand("trace", "height trace and growth classification");
  add_common(tr, trace.common, {"text", "csv"});
  tr->add_option("--map", trace.map)->required();
  tr->add_option("--d", trace.d)->check(CLI::Range(2, 16));
  tr->add_option("--n", trace.n);
  tr->add_option("--iters", trace.iters);
  tr->add_option("--seed", trace.seed);
  tr->add_option("--lo", trace.lo);
  tr->add_option("--hi", trace.hi);
  tr->add_option("--budget", trace.budget, "digit budget");
  tr->add_option("--csv", trace.csv, "also write the trace CSV here");
  tr->add_option("--json", trace.json, "also write the JSON report here");
  tr->add_flag("--no-timing", trace.no_timing, "write 0 for elapsed_ms (byte-stable output)");

  CheckArgs check;
  auto* ch = app.add_subcommand("check", "randomized exact identity checks");
  add_common(ch, check.common, {"text"});
  ch->add_option("kind", check.kind)
      ->required()
      ->check(CLI::IsMember(
          {"duality", "shift", "universal-duality", "conjugation", "corrugated", "monodromy", "lax"}));
  ch->add_option("--d", check.d, "dimension; 0 alternates 2 and 3 for universal-duality");
  ch->add_option("--n", check.n);
  ch->add_option("--map", check.map);
  ch->add_option("--I", check.i, "jumps (duality) or rows (universal-duality)");
  ch->add_option("--J", check.j, "intersections (duality) or rows (universal-duality)");
  ch->add_option("--trials", check.trials)->check(CLI::PositiveNumber);
  ch->add_option("--seed", check.seed);
  ch->add_option("--precision", check.precision, "MPFR bits for lax")->check(CLI::Range(128, 1 << 16));
  ch->add_option("--tol", check.tol, "conservation tolerance for lax");

  TablesArgs tables;
  tables.jobs = default_jobs();
  auto* tb = app.add_subcommand("tables", "reproduce the growth tables");
  add_common(tb, tables.common, {"text"});
  tb->add_option("--seeds", tables.seeds, "e.g. 1-5 or 1,4,9");
  tb->add_option("--rows", tables.rows, "e.g. 2d:1-4,3d:12");
  tb->add_option("--out-dir", tables.out_dir, "per-seed CSV traces and report.json");
  tb->add_option("--jobs", tables.jobs, "concurrent traces (default $PENTALAB_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  tb->add_option("--budget", tables.budget, "digit budget");
  tb->add_option("--n", tables.n);
  tb->add_option("--iters-2d", tables.iters_2d);
  tb->add_option("--iters-3d", tables.iters_3d);
  tb->add_flag("--no-timing", tables.no_timing);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*g) return run_gen(gen);
    if (*ap) return run_apply(apply);
    if (*tr) return run_trace_cmd(trace);
    if (*ch) {
      if (!check.i.empty() != !check.j.empty()) throw UsageError("--I and --J go together");
      return run_check(check);
    }
    if (*tb) return run_tables(tables);
  } catch (const DegeneracyError& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
