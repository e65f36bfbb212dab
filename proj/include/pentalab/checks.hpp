#pragma once

// Randomized exact checks of the map identities: inverse duality, the
// universal-map inverse and conjugation, the corrugated restriction, mixed
// versus skew presentations and monodromy preservation. Each trial draws
// fresh data from its seed and moves to the next seed on a degenerate draw.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pentalab/lax.hpp"
#include "pentalab/maps.hpp"

namespace pentalab {

inline constexpr int kTrialReseeds = 20;

struct TrialOutcome {
  bool pass = false;
  std::optional<long> shift;  // b = shift(a, s) where the check is up to shift
  std::string detail;
  std::uint64_t seed_used = 0;
};

/// Calls f(seed), f(seed + 1), ... until one call is free of degeneracies.
template <typename F>
auto with_reseed(std::uint64_t seed, F&& f) -> decltype(f(seed)) {
  std::string last;
  for (int i = 0; i <= kTrialReseeds; ++i) {
    try {
      auto out = f(seed + static_cast<std::uint64_t>(i));
      out.seed_used = seed + static_cast<std::uint64_t>(i);
      return out;
    } catch (const DegeneracyError& e) {
      last = e.what();
    }
  }
  throw AllSeedsDegenerate("every reseed failed; last error: " + last);
}

// ---------------------------------------------------------------------------
// Random specs

inline Generalized random_generalized(std::size_t d, std::mt19937_64& rng, IntRange range = {1, 3}) {
  std::uniform_int_distribution<long> dist(range.lo, range.hi);
  Generalized g{Offsets(d - 1), Offsets(d - 1)};
  for (auto& x : g.jumps) x = dist(rng);
  for (auto& x : g.intersections) x = dist(rng);
  return g;
}

/// Rows that differ by a constant vector describe families that are index
/// shifts of each other; such specs collapse two outputs into one.
inline bool rows_distinct_mod_shift(const IntMatrix& m) {
  std::vector<Offsets> norm;
  for (const auto& r : m) {
    Offsets x = r;
    for (auto& v : x) v -= r.front();
    if (std::find(norm.begin(), norm.end(), x) != norm.end()) return false;
    norm.push_back(std::move(x));
  }
  return true;
}

/// Both the rows and the columns must be distinct modulo shifts: equal column
/// differences put every point of an inverse span on one line.
inline bool nondegenerate_offsets(const IntMatrix& m) {
  IntMatrix t(m.size(), Offsets(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) t[c][r] = m[r][c];
  return rows_distinct_mod_shift(m) && rows_distinct_mod_shift(t);
}

inline IntMatrix random_distinct_rows(std::size_t d, std::mt19937_64& rng, IntRange range) {
  std::uniform_int_distribution<long> dist(range.lo, range.hi);
  IntMatrix m(d, Offsets(d));
  do
    for (auto& row : m)
      for (auto& x : row) x = dist(rng);
  while (!nondegenerate_offsets(m));
  return m;
}

inline Universal random_universal(std::size_t d, std::mt19937_64& rng, IntRange range = {-3, 3}) {
  IntMatrix i = random_distinct_rows(d, rng, range);
  return {i, random_distinct_rows(d, rng, range)};
}

/// Skew-symmetric d x d matrix (d >= 3) with entries in range and rows
/// distinct modulo shifts (the transpose condition then holds too). For d = 2 no such matrix exists.
inline IntMatrix random_skew_symmetric(std::size_t d, std::mt19937_64& rng, IntRange range = {-3, 3}) {
  if (d < 3) throw UsageError("random_skew_symmetric: every 2x2 skew-symmetric matrix has shifted rows");
  std::uniform_int_distribution<long> dist(range.lo, range.hi);
  IntMatrix m(d, Offsets(d, 0));
  do
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r + 1; c < d; ++c) {
        m[r][c] = dist(rng);
        m[c][r] = -m[r][c];
      }
  while (!rows_distinct_mod_shift(m));
  return m;
}

namespace detail {

inline long span_of(const MapSpec& spec, std::size_t d) {
  const MeetPlan p = make_plan(spec, d);
  return p.max_offset - p.min_offset;
}

inline bool same_on_overlap(const StripTuple& a, const StripTuple& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t s = 0; s < a.size(); ++s)
    if (!equal_with_shift(a[s], b[s], 0)) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Trials

/// T_{J*,I*} after T_{I,J} on a random strip is a pure index shift.
inline TrialOutcome duality_trial(const Generalized& g, std::uint64_t seed, IntRange coords = {1, 10}) {
  const std::size_t d = g.jumps.size() + 1;
  const Generalized inv = inverse_spec(g);
  const long reach = detail::span_of(g, d) + detail::span_of(inv, d);
  const std::size_t length = static_cast<std::size_t>(2 * reach) + d + 8;
  return with_reseed(seed, [&](std::uint64_t s) {
    const VertexStrip strip = random_strip(d, length, coords, s);
    const VertexStrip back = apply_strip(inv, apply_strip(g, strip));
    TrialOutcome out;
    out.shift = equal_up_to_shift(strip, back, reach + static_cast<long>(d));
    out.pass = out.shift.has_value();
    if (!out.pass) out.detail = format_map_spec(g) + ": round trip is not a shift";
    return out;
  });
}

/// A generalized map that should act as a pure shift, e.g. T:1,2/2,1 in P^3.
inline TrialOutcome shift_map_trial(const Generalized& g, std::uint64_t seed, IntRange coords = {1, 10}) {
  const std::size_t d = g.jumps.size() + 1;
  const long reach = detail::span_of(g, d);
  return with_reseed(seed, [&](std::uint64_t s) {
    const VertexStrip strip = random_strip(d, static_cast<std::size_t>(2 * reach) + d + 8, coords, s);
    TrialOutcome out;
    out.shift = equal_up_to_shift(strip, apply_strip(g, strip), reach + static_cast<long>(d));
    out.pass = out.shift.has_value();
    if (!out.pass) out.detail = format_map_spec(g) + " is not a shift";
    return out;
  });
}

/// T_{-J^T,-I^T} after T_{I,J} is the identity on d-tuples of strips.
inline TrialOutcome universal_duality_trial(const Universal& u, std::uint64_t seed, IntRange coords = {1, 10}) {
  const std::size_t d = u.jumps.size();
  return with_reseed(seed, [&](std::uint64_t s) {
    const StripTuple y = random_strip_tuple(d, 44, coords, s);
    const StripTuple back = apply_universal(universal_inverse_spec(u), apply_universal(u, y));
    TrialOutcome out;
    out.pass = detail::same_on_overlap(y, back);
    out.shift = 0;
    if (!out.pass) out.detail = format_map_spec(u) + ": round trip differs from the identity";
    return out;
  });
}

/// alpha_J T_{I,J} alpha_J = T_{J,I} for skew-symmetric J.
inline TrialOutcome conjugation_trial(const IntMatrix& i, const IntMatrix& j, std::uint64_t seed,
                                      IntRange coords = {1, 10}) {
  const std::size_t d = i.size();
  return with_reseed(seed, [&](std::uint64_t s) {
    const StripTuple y = random_strip_tuple(d, 44, coords, s);
    const StripTuple lhs = alpha_map(j, apply_universal(Universal{i, j}, alpha_map(j, y)));
    const StripTuple rhs = apply_universal(Universal{j, i}, y);
    TrialOutcome out;
    out.pass = detail::same_on_overlap(lhs, rhs);
    out.shift = 0;
    if (!out.pass) out.detail = "conjugation identity fails for " + format_map_spec(Universal{i, j});
    return out;
  });
}

struct CorrugatedOutcome {
  bool pass = false;
  std::optional<long> shift_t1;   // T_1 image = shift(T_cor image, s)
  std::optional<long> shift_t2;
  std::optional<long> shift_t1_t2;  // T_2 image = shift(T_1 image, s)
  std::uint64_t seed_used = 0;
};

/// On a random corrugated strip in P^d, T_cor, T_1 and T_{d-1} agree up to
/// index shifts.
inline CorrugatedOutcome corrugated_trial(std::size_t d, std::uint64_t seed, std::size_t length = 24) {
  return with_reseed(seed, [&](std::uint64_t s) {
    const CorrugationWitness w = random_corrugated_strip(d, length, {1, 5}, s);
    const VertexStrip c = apply_strip(Corrugated{}, w.strip);
    const VertexStrip t1 = apply_strip(dented(d, 1), w.strip);
    const VertexStrip t2 = apply_strip(dented(d, d - 1), w.strip);
    const long window = static_cast<long>(2 * d + 2);
    CorrugatedOutcome out;
    out.shift_t1 = equal_up_to_shift(c, t1, window);
    out.shift_t2 = equal_up_to_shift(c, t2, window);
    out.shift_t1_t2 = equal_up_to_shift(t1, t2, window);
    out.pass = out.shift_t1 && out.shift_t2 && out.shift_t1_t2;
    return out;
  });
}

/// A mixed map and a skew map, both described as specs, agree exactly.
inline TrialOutcome same_map_trial(const MapSpec& a, const MapSpec& b, std::size_t d, std::uint64_t seed,
                                   IntRange coords = {1, 10}) {
  return with_reseed(seed, [&](std::uint64_t s) {
    const VertexStrip strip = random_strip(d, 24, coords, s);
    TrialOutcome out;
    out.pass = equal_with_shift(apply_strip(a, strip), apply_strip(b, strip), 0);
    out.shift = 0;
    if (!out.pass) out.detail = format_map_spec(a) + " differs from " + format_map_spec(b);
    return out;
  });
}

namespace detail {

/// v'_{k+n} = M v'_k for k in [0, n), on an image strip covering [0, 2n).
inline bool twisted_by(const VertexStrip& image, const ProjMap& m, long n) {
  for (long k = 0; k < n; ++k)
    if (!(image.at(k + n) == apply_map(m, image.at(k)))) return false;
  return true;
}

}  // namespace detail

/// The image of a random twisted polygon is twisted by the same monodromy:
/// checked on an image window covering two periods, independently of the
/// polygon-level bookkeeping. Universal specs act on d polygons sharing M.
inline TrialOutcome monodromy_trial(const MapSpec& spec, std::size_t d, std::size_t n, std::uint64_t seed,
                                    IntRange coords = {1, 10}) {
  const long nl = static_cast<long>(n);
  return with_reseed(seed, [&](std::uint64_t s) {
    TrialOutcome out;
    out.shift = 0;
    if (const auto* u = std::get_if<Universal>(&spec)) {
      std::vector<TwistedPolygon> polys{random_twisted(d, n, coords, s)};
      for (std::size_t i = 1; i < d; ++i)
        polys.push_back(random_twisted(polys.front().monodromy(), n, coords, s * 7919 + i));
      long pad = 0;
      for (const auto* m : {&u->jumps, &u->intersections})
        for (const auto& r : *m)
          for (long x : r) pad = std::max(pad, std::abs(x));
      pad *= 2;
      StripTuple wide;
      for (const auto& p : polys) wide.push_back(materialize(p, -pad, 2 * nl + pad));
      const StripTuple image = apply_universal(*u, wide);
      const auto out_polys = apply_universal(*u, std::span<const TwistedPolygon>(polys));
      out.pass = true;
      for (std::size_t i = 0; i < d; ++i)
        out.pass = out.pass && detail::twisted_by(image[i], polys.front().monodromy(), nl) &&
                   out_polys[i].monodromy() == polys.front().monodromy() &&
                   equal_with_shift(image[i], materialize(out_polys[i], 0, nl), 0);
    } else {
      const TwistedPolygon p = random_twisted(d, n, coords, s);
      const MeetPlan plan = make_plan(spec, d);
      const VertexStrip image = apply_strip(spec, materialize(p, plan.min_offset, 2 * nl + plan.max_offset));
      const TwistedPolygon q = apply_polygon(spec, p);
      out.pass = detail::twisted_by(image, p.monodromy(), nl) && q.monodromy() == p.monodromy() &&
                 equal_with_shift(image, materialize(q, 0, nl), 0);
    }
    if (!out.pass) out.detail = format_map_spec(spec) + " changes the monodromy";
    return out;
  });
}

struct LaxOutcome {
  LaxReport report;
  std::uint64_t seed_used = 0;
};

/// Spectral conservation on a random n-gon; draws without a real unit lift
/// (SignObstruction) or with a degenerate image move to the next seed.
inline LaxOutcome lax_trial(const MapSpec& spec, std::size_t d, std::size_t n, std::uint64_t seed,
                            const LaxConfig& cfg = {}, IntRange coords = {1, 10}) {
  for (int i = 0; i <= 4 * kTrialReseeds; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    try {
      return {conservation_check(random_twisted(d, n, coords, s), spec, cfg), s};
    } catch (const SignObstruction&) {
    } catch (const DegenerateImage&) {
    }
  }
  throw AllSeedsDegenerate("no seed admits a real unit-determinant lift before and after the map");
}

}  // namespace pentalab
