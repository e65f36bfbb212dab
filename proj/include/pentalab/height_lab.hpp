#pragma once

// Height growth under iteration and the growth-class classifier.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pentalab/maps.hpp"

namespace pentalab {

struct ExperimentConfig {
  MapSpec spec;
  std::size_t d = 2;
  std::size_t n = 11;
  int iterations = 10;
  std::uint64_t seed = 1;
  IntRange coord_range{1, 10};
  std::size_t digit_budget = 2'000'000;
  int max_reseeds = 20;
};

struct TraceRecord {
  int t = 0;
  double log10_height = 0;
  std::size_t digits = 0;
  double elapsed_ms = 0;  // time for this step, map plus height
};

struct HeightTrace {
  std::vector<TraceRecord> records;
  bool truncated = false;
  std::uint64_t seed_used = 0;
  int reseeds = 0;
};

namespace detail {

struct Growth {
  std::optional<TraceRecord> last;
  std::optional<TraceRecord> before_last;

  /// Digit count expected at the next step if the last ratio persists.
  double predicted_digits() const {
    if (!last || !before_last || before_last->digits == 0) return 0;
    const double ratio = static_cast<double>(last->digits) / static_cast<double>(before_last->digits);
    return static_cast<double>(last->digits) * std::max(ratio, 1.0);
  }
};

}  // namespace detail

/// Iterates cfg.spec on a random polygon and records its height after each
/// step. The trace stops, flagged truncated, once a height exceeds the digit
/// budget or the current growth ratio predicts that the next one will.
inline HeightTrace run_trace(const ExperimentConfig& cfg) {
  if (cfg.iterations < 3) throw UsageError("run_trace: need at least 3 iterations");
  if (cfg.n <= cfg.d + 2) throw UsageError("run_trace: need n > d + 2");
  check_spec(cfg.spec, cfg.d);
  if (std::holds_alternative<Universal>(cfg.spec)) throw UsageError("run_trace: universal maps act on tuples");
  using clock = std::chrono::steady_clock;

  for (int attempt = 0; attempt <= cfg.max_reseeds; ++attempt) {
    HeightTrace trace;
    trace.seed_used = cfg.seed + static_cast<std::uint64_t>(attempt);
    trace.reseeds = attempt;
    try {
      auto start = clock::now();
      TwistedPolygon p = random_twisted(cfg.d, cfg.n, cfg.coord_range, trace.seed_used);
      detail::Growth growth;
      for (int t = 0; t <= cfg.iterations; ++t) {
        if (t > 0) {
          if (growth.predicted_digits() > static_cast<double>(cfg.digit_budget)) {
            trace.truncated = true;
            break;
          }
          start = clock::now();
          p = apply_polygon(cfg.spec, p);
        }
        const Integer h = polygon_height(p);
        TraceRecord r{t, log10_height(h), digit_count(h),
                      std::chrono::duration<double, std::milli>(clock::now() - start).count()};
        trace.records.push_back(r);
        growth.before_last = growth.last;
        growth.last = r;
        if (r.digits > cfg.digit_budget) {
          trace.truncated = true;
          break;
        }
      }
      return trace;
    } catch (const DegenerateImage&) {
    } catch (const DegenerateFrame&) {
    }
  }
  throw AllSeedsDegenerate("every seed from " + std::to_string(cfg.seed) + " to " +
                           std::to_string(cfg.seed + static_cast<std::uint64_t>(cfg.max_reseeds)) +
                           " hit a degenerate image");
}

// ---------------------------------------------------------------------------
// Classification

enum class GrowthLabel { PolynomialLogHeight, SuperExponential, Inconclusive };

inline std::string to_string(GrowthLabel l) {
  switch (l) {
    case GrowthLabel::PolynomialLogHeight: return "polynomial-log-height";
    case GrowthLabel::SuperExponential: return "super-exponential";
    case GrowthLabel::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline GrowthLabel parse_growth_label(const std::string& s) {
  if (s == "polynomial-log-height") return GrowthLabel::PolynomialLogHeight;
  if (s == "super-exponential") return GrowthLabel::SuperExponential;
  if (s == "inconclusive") return GrowthLabel::Inconclusive;
  throw ParseError("unknown growth label '" + s + "'");
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Least squares y = slope x + intercept. A perfect fit, including a flat
/// one, has r2 = 1.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  return f;
}

struct ClassifierOptions {
  double sigma_min = 0.2;
  double r_min = 0.9;
  int t_min = 2;
};

struct Classification {
  GrowthLabel label = GrowthLabel::Inconclusive;
  double sigma = 0;     // slope of ln(log10 H) against t
  double r2_exp = 0;
  double alpha = 0;     // slope of ln(log10 H) against ln t
  double r2_poly = 0;
  std::size_t points = 0;
};

/// Fits ln(log10 H) against t (super-exponential model) and against ln t
/// (polynomial model) over t >= t_min. Super-exponential needs sigma >=
/// sigma_min, R^2 >= r_min and a better fit than the polynomial model.
inline Classification classify(const HeightTrace& trace, const ClassifierOptions& opt = {}) {
  std::vector<double> t, lnt, y;
  for (const auto& r : trace.records)
    if (r.t >= opt.t_min && r.t > 0 && r.log10_height > 0) {
      t.push_back(r.t);
      lnt.push_back(std::log(static_cast<double>(r.t)));
      y.push_back(std::log(r.log10_height));
    }
  if (y.size() < 3)
    throw InsufficientData("classify: need 3 records with t >= " + std::to_string(opt.t_min) + " and height > 1");
  const LineFit e = fit_line(t, y);
  const LineFit p = fit_line(lnt, y);
  Classification c;
  c.sigma = e.slope;
  c.r2_exp = e.r2;
  c.alpha = p.slope;
  c.r2_poly = p.r2;
  c.points = y.size();
  if (c.sigma >= opt.sigma_min && c.r2_exp >= opt.r_min && c.r2_exp > c.r2_poly)
    c.label = GrowthLabel::SuperExponential;
  else if (c.r2_poly >= opt.r_min)
    c.label = GrowthLabel::PolynomialLogHeight;
  else
    c.label = GrowthLabel::Inconclusive;
  return c;
}

// ---------------------------------------------------------------------------
// Tables

struct TableRow {
  std::string id;  // "2d:5", "3d:12"
  std::size_t d;
  std::string spec;
  GrowthLabel expected;
};

inline const std::vector<TableRow>& table_rows() {
  using L = GrowthLabel;
  static const std::vector<TableRow> rows = {
      {"2d:1", 2, "T:2/1", L::PolynomialLogHeight},
      {"2d:2", 2, "T:3/1", L::PolynomialLogHeight},
      {"2d:3", 2, "T:3/2", L::PolynomialLogHeight},
      {"2d:4", 2, "T:2/3", L::PolynomialLogHeight},
      {"2d:5", 2, "skew:0,2;1,4", L::SuperExponential},
      {"2d:6", 2, "skew:0,2;1,5", L::SuperExponential},
      {"2d:7", 2, "skew:1,2;0,3", L::SuperExponential},
      {"2d:8", 2, "skew:1,2;0,4", L::SuperExponential},
      {"3d:1", 3, "T:2,2/1,1", L::PolynomialLogHeight},
      {"3d:2", 3, "T:2,1/1,1", L::PolynomialLogHeight},
      {"3d:3", 3, "T:3,1/1,1", L::PolynomialLogHeight},
      {"3d:4", 3, "T:2,2/1,2", L::PolynomialLogHeight},
      {"3d:5", 3, "T:1,2/1,2", L::PolynomialLogHeight},
      {"3d:6", 3, "T:1,3/1,3", L::PolynomialLogHeight},
      {"3d:7", 3, "T:1,2/3,1", L::SuperExponential},
      {"3d:8", 3, "T:1,2/1,3", L::SuperExponential},
      {"3d:9", 3, "T:2,3/1,1", L::SuperExponential},
      {"3d:10", 3, "T:2,4/1,1", L::SuperExponential},
      {"3d:11", 3, "T:3,3/1,1", L::SuperExponential},
      {"3d:12", 3, "mixed:0,3|1,2,4", L::SuperExponential},
      {"3d:13", 3, "mixed:1,3|0,2,5", L::SuperExponential},
  };
  return rows;
}

/// Row filter such as "2d:1-4", "3d:9", "2d" or "2d:5-8,3d:12-13"; empty
/// selects every row.
inline std::vector<TableRow> select_rows(const std::string& filter) {
  const auto& all = table_rows();
  if (filter.empty()) return all;
  std::vector<bool> keep(all.size(), false);
  for (auto part : detail::split(filter, ',')) {
    const auto colon = part.find(':');
    const std::string_view dim = part.substr(0, colon);
    if (dim != "2d" && dim != "3d") throw ParseError("row filter: expected 2d or 3d, got '" + std::string(dim) + "'");
    long lo = 1, hi = 1000;
    if (colon != std::string_view::npos) {
      const auto range = detail::split(part.substr(colon + 1), '-');
      if (range.size() > 2) throw ParseError("row filter: bad range in '" + std::string(part) + "'");
      lo = detail::parse_long(range[0]);
      hi = range.size() == 2 ? detail::parse_long(range[1]) : lo;
    }
    bool any = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!all[i].id.starts_with(std::string(dim) + ":")) continue;
      const long num = detail::parse_long(std::string_view(all[i].id).substr(3));
      if (num >= lo && num <= hi) keep[i] = any = true;
    }
    if (!any) throw ParseError("row filter '" + std::string(part) + "' selects no rows");
  }
  std::vector<TableRow> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (keep[i]) out.push_back(all[i]);
  return out;
}

struct TableOptions {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int iterations_2d = 10;
  int iterations_3d = 8;
  std::size_t n = 11;
  std::size_t digit_budget = 2'000'000;
  ClassifierOptions classifier;
  unsigned jobs = 1;
  std::string rows;  // filter, see select_rows
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::optional<HeightTrace> trace;
  std::optional<Classification> classification;
  std::string error;
};

struct RowReport {
  TableRow row;
  GrowthLabel observed = GrowthLabel::Inconclusive;
  double median_final_log10_height = 0;
  std::size_t truncated_count = 0;
  std::vector<SeedResult> seeds;
  bool matched() const { return observed == row.expected; }
};

struct TableReport {
  std::vector<RowReport> rows;
  bool all_matched() const {
    return std::all_of(rows.begin(), rows.end(), [](const RowReport& r) { return r.matched(); });
  }
};

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

/// Majority label over the classified seeds; a label needs more than half of
/// all seeds, otherwise the row is inconclusive.
inline GrowthLabel majority(const std::vector<SeedResult>& seeds) {
  std::map<GrowthLabel, std::size_t> count;
  for (const auto& s : seeds)
    if (s.classification) ++count[s.classification->label];
  for (const auto& [label, c] : count)
    if (2 * c > seeds.size()) return label;
  return GrowthLabel::Inconclusive;
}

/// Runs every selected row for every seed, at most opt.jobs traces at a time.
/// Per-seed failures are recorded in the report, not thrown.
inline TableReport reproduce_tables(const TableOptions& opt,
                                    const std::function<void(const RowReport&)>& on_row = {}) {
  const std::vector<TableRow> rows = select_rows(opt.rows);
  if (opt.seeds.empty()) throw UsageError("reproduce_tables: no seeds");
  TableReport report;
  for (const auto& row : rows) {
    RowReport r;
    r.row = row;
    for (auto s : opt.seeds) r.seeds.push_back({s, {}, {}, {}});
    report.rows.push_back(std::move(r));
  }

  const std::size_t per_row = opt.seeds.size();
  const std::size_t total = rows.size() * per_row;
  std::atomic<std::size_t> next{0};
  std::vector<std::atomic<std::size_t>> remaining(rows.size());
  for (auto& x : remaining) x = per_row;
  std::mutex sink;

  auto finish_row = [&](RowReport& r) {
    std::vector<double> finals;
    for (const auto& s : r.seeds) {
      if (!s.trace) continue;
      if (s.trace->truncated) ++r.truncated_count;
      if (!s.trace->records.empty()) finals.push_back(s.trace->records.back().log10_height);
    }
    r.median_final_log10_height = median(finals);
    r.observed = majority(r.seeds);
    if (on_row) {
      std::lock_guard lock(sink);
      on_row(r);
    }
  };

  auto worker = [&] {
    for (std::size_t i; (i = next++) < total;) {
      const std::size_t ri = i / per_row, si = i % per_row;
      RowReport& r = report.rows[ri];
      SeedResult& s = r.seeds[si];
      try {
        ExperimentConfig cfg;
        cfg.d = r.row.d;
        cfg.spec = parse_map_spec(r.row.spec, cfg.d);
        cfg.n = opt.n;
        cfg.iterations = cfg.d == 2 ? opt.iterations_2d : opt.iterations_3d;
        cfg.seed = s.seed;
        cfg.digit_budget = opt.digit_budget;
        s.trace = run_trace(cfg);
        s.classification = classify(*s.trace, opt.classifier);
      } catch (const Error& e) {
        s.error = e.what();
      }
      if (--remaining[ri] == 0) finish_row(r);
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(total)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return report;
}

}  // namespace pentalab
