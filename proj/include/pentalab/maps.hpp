#pragma once

// Application of pentagram maps to strips and twisted polygons, plus the
// duality (alpha) maps on tuples of sequences.

#include <algorithm>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pentalab/map_spec.hpp"
#include "pentalab/polygon.hpp"

namespace pentalab {

/// How the image of v_k is built from vertices at offsets relative to k.
struct MeetPlan {
  struct Anchor {
    std::size_t family;
    long offset;
  };
  // Hyperplane route: families of vertex offsets, met at the given anchors.
  std::vector<Offsets> families;
  std::vector<Anchor> meets;
  // Span route: span(first) meet span(second).
  bool by_spans = false;
  Offsets first, second;

  long min_offset = 0;
  long max_offset = 0;
};

inline MeetPlan make_plan(const MapSpec& spec, std::size_t d) {
  check_spec(spec, d);
  MeetPlan plan;
  if (const auto* g = std::get_if<Generalized>(&spec)) {
    plan.families = {hyperplane_offsets(g->jumps)};
    for (long a : hyperplane_offsets(g->intersections)) plan.meets.push_back({0, a});
  } else if (const auto* s = std::get_if<Skew>(&spec)) {
    plan.families = s->tuples;
    for (std::size_t l = 0; l < d; ++l) plan.meets.push_back({l, 0});
  } else if (std::holds_alternative<Corrugated>(spec)) {
    const long dl = static_cast<long>(d);
    plan.by_spans = true;
    plan.first = {-1, dl - 1};
    plan.second = {0, dl};
  } else if (const auto* m = std::get_if<Mixed>(&spec)) {
    plan.by_spans = true;
    plan.first = m->first;
    plan.second = m->second;
  } else {
    throw UsageError("universal maps act on d-tuples; use apply_universal");
  }
  long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
  auto see = [&](long o) {
    lo = std::min(lo, o);
    hi = std::max(hi, o);
  };
  if (plan.by_spans) {
    for (long o : plan.first) see(o);
    for (long o : plan.second) see(o);
  } else {
    for (const auto& m : plan.meets)
      for (long o : plan.families[m.family]) see(m.offset + o);
  }
  plan.min_offset = lo;
  plan.max_offset = hi;
  return plan;
}

/// Largest vertex offset used relative to the output index.
inline long reach(const MapSpec& spec, std::size_t d) { return make_plan(spec, d).max_offset; }

/// The diagonal hyperplane(s) anchored at k: one for a generalized map, d for
/// a skew map.
inline std::vector<Hyperplane> diagonal_hyperplane(const VertexStrip& s, const MapSpec& spec, long k) {
  const MeetPlan plan = make_plan(spec, s.dim());
  if (plan.by_spans) throw UsageError("diagonal_hyperplane: map is not defined by hyperplanes");
  std::vector<Hyperplane> out;
  for (const auto& fam : plan.families) {
    std::vector<ProjPoint> pts;
    for (long o : fam) pts.push_back(s.at(k + o));
    out.push_back(span_hyperplane(pts));
  }
  return out;
}

inline std::vector<Hyperplane> diagonal_hyperplane(const TwistedPolygon& p, const MapSpec& spec, long k) {
  const MeetPlan plan = make_plan(spec, p.dim());
  long lo = 0, hi = 0;
  for (const auto& fam : plan.families)
    for (long o : fam) {
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
  return diagonal_hyperplane(materialize(p, k + lo, k + hi + 1), spec, k);
}

/// Applies a non-universal map to a strip. The output window is
/// [lo - min_offset, hi - max_offset).
inline VertexStrip apply_strip(const MapSpec& spec, const VertexStrip& s) {
  const std::size_t d = s.dim();
  const MeetPlan plan = make_plan(spec, d);
  const long out_lo = s.lo() - plan.min_offset;
  const long out_hi = s.hi() - plan.max_offset;
  if (out_hi <= out_lo)
    throw WindowExceeded("window of " + std::to_string(s.size()) + " vertices is too short for this map");

  std::vector<ProjPoint> out;
  out.reserve(static_cast<std::size_t>(out_hi - out_lo));
  try {
    if (plan.by_spans) {
      std::vector<ProjPoint> a, b;
      for (long k = out_lo; k < out_hi; ++k) {
        a.clear();
        b.clear();
        for (long o : plan.first) a.push_back(s.at(k + o));
        for (long o : plan.second) b.push_back(s.at(k + o));
        out.push_back(meet_spans(a, b));
      }
    } else {
      // Each hyperplane P^f_m is computed once and shared between meets. The
      // covectors stay unreduced; only the meets are canonicalized.
      struct Cache {
        long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
        std::vector<IVector> planes;
      };
      std::vector<Cache> cache(plan.families.size());
      for (const auto& m : plan.meets) {
        cache[m.family].lo = std::min(cache[m.family].lo, out_lo + m.offset);
        cache[m.family].hi = std::max(cache[m.family].hi, out_hi + m.offset);
      }
      std::vector<IVector> rows;
      for (std::size_t f = 0; f < plan.families.size(); ++f)
        for (long anchor = cache[f].lo; anchor < cache[f].hi; ++anchor) {
          rows.clear();
          for (long o : plan.families[f]) rows.push_back(s.at(anchor + o).coords());
          IVector h = kernel_vector(rows);
          if (is_zero(h)) throw DegenerateSpan("diagonal vertices are projectively dependent");
          cache[f].planes.push_back(std::move(h));
        }
      for (long k = out_lo; k < out_hi; ++k) {
        rows.clear();
        for (const auto& m : plan.meets)
          rows.push_back(cache[m.family].planes[static_cast<std::size_t>(k + m.offset - cache[m.family].lo)]);
        IVector v = kernel_vector(rows);
        if (is_zero(v)) throw DegenerateMeet("diagonal hyperplanes are dependent");
        out.emplace_back(std::move(v));
      }
    }
  } catch (const DegeneracyError& e) {
    throw DegenerateImage(e.what());
  }
  VertexStrip image(out_lo, std::move(out));
  if (!image.is_generic()) throw DegenerateImage("image strip is not in general position");
  return image;
}

/// Applies a non-universal map to a twisted polygon; the monodromy carries
/// over unchanged because every construction commutes with M.
inline TwistedPolygon apply_polygon(const MapSpec& spec, const TwistedPolygon& p) {
  const MeetPlan plan = make_plan(spec, p.dim());
  const long n = static_cast<long>(p.size());
  const VertexStrip window = materialize(p, plan.min_offset, n + plan.max_offset);
  VertexStrip image = apply_strip(spec, window);
  std::vector<ProjPoint> vs(image.vertices().begin(), image.vertices().begin() + n);
  TwistedPolygon out(std::move(vs), p.monodromy());
  if (!is_generic(out)) throw DegenerateImage("image polygon is not in general position");
  return out;
}

// ---------------------------------------------------------------------------
// Tuples of sequences

using StripTuple = std::vector<VertexStrip>;

namespace detail {

struct Window {
  long lo, hi;
  bool empty() const { return hi <= lo; }
};

/// Indices j with j + shifts[s] inside window s for every s.
inline Window common_window(const StripTuple& seqs, const Offsets& shifts) {
  Window w{std::numeric_limits<long>::min(), std::numeric_limits<long>::max()};
  for (std::size_t s = 0; s < seqs.size(); ++s) {
    w.lo = std::max(w.lo, seqs[s].lo() - shifts[s]);
    w.hi = std::min(w.hi, seqs[s].hi() - shifts[s]);
  }
  return w;
}

inline void check_tuple(const IntMatrix& m, const StripTuple& seqs) {
  const std::size_t d = seqs.size();
  if (d == 0) throw UsageError("empty tuple of sequences");
  for (const auto& s : seqs)
    if (s.dim() != d) throw UsageError("tuple size must equal the dimension d");
  if (m.size() != d) throw UsageError("matrix must have d rows");
  for (const auto& r : m)
    if (r.size() != d) throw UsageError("matrix must have d columns");
}

}  // namespace detail

/// alpha_A: sequence r of the output is the hyperplane through
/// phi_1(j + A[r][0]), ..., phi_d(j + A[r][d-1]), read as a point of the dual
/// space.
inline StripTuple alpha_map(const IntMatrix& a, const StripTuple& seqs) {
  detail::check_tuple(a, seqs);
  const std::size_t d = seqs.size();
  StripTuple out;
  std::vector<ProjPoint> pts(d);
  for (std::size_t r = 0; r < d; ++r) {
    const detail::Window w = detail::common_window(seqs, a[r]);
    if (w.empty()) throw WindowExceeded("alpha_map: windows too short for row " + std::to_string(r));
    std::vector<ProjPoint> seq;
    for (long j = w.lo; j < w.hi; ++j) {
      for (std::size_t s = 0; s < d; ++s) pts[s] = seqs[s].at(j + a[r][s]);
      seq.push_back(as_point(span_hyperplane(pts)));
    }
    out.emplace_back(w.lo, std::move(seq));
  }
  return out;
}

/// T_{I,J} on d-tuples of strips, evaluated vertex by vertex from its
/// definition: T_p v_k is the meet of the hyperplanes P^{I_l}_{k + J[p][l]},
/// each through v^1_{m + I[l][0]}, ..., v^d_{m + I[l][d-1]}.
inline StripTuple apply_universal(const Universal& spec, const StripTuple& seqs) {
  detail::check_tuple(spec.jumps, seqs);
  detail::check_tuple(spec.intersections, seqs);
  const std::size_t d = seqs.size();
  std::vector<detail::Window> family(d);
  for (std::size_t l = 0; l < d; ++l) family[l] = detail::common_window(seqs, spec.jumps[l]);
  StripTuple out;
  std::vector<ProjPoint> pts(d);
  std::vector<Hyperplane> planes(d);
  for (std::size_t p = 0; p < d; ++p) {
    long lo = std::numeric_limits<long>::min(), hi = std::numeric_limits<long>::max();
    for (std::size_t l = 0; l < d; ++l) {
      lo = std::max(lo, family[l].lo - spec.intersections[p][l]);
      hi = std::min(hi, family[l].hi - spec.intersections[p][l]);
    }
    if (hi <= lo) throw WindowExceeded("apply_universal: windows too short for output " + std::to_string(p));
    std::vector<ProjPoint> seq;
    try {
      for (long k = lo; k < hi; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
          const long m = k + spec.intersections[p][l];
          for (std::size_t s = 0; s < d; ++s) pts[s] = seqs[s].at(m + spec.jumps[l][s]);
          planes[l] = span_hyperplane(pts);
        }
        seq.push_back(meet_hyperplanes(planes));
      }
    } catch (const DegeneracyError& e) {
      throw DegenerateImage(e.what());
    }
    out.emplace_back(lo, std::move(seq));
  }
  return out;
}

/// Universal map on d twisted polygons sharing one monodromy.
inline std::vector<TwistedPolygon> apply_universal(const Universal& spec, std::span<const TwistedPolygon> polys) {
  if (polys.empty()) throw UsageError("apply_universal: no polygons");
  const std::size_t d = polys.front().dim();
  const long n = static_cast<long>(polys.front().size());
  for (const auto& p : polys) {
    if (p.dim() != d || static_cast<long>(p.size()) != n) throw UsageError("apply_universal: shape mismatch");
    if (!(p.monodromy() == polys.front().monodromy()))
      throw MonodromyMismatch("universal maps need a common monodromy");
  }
  long span = 0;
  for (const auto* m : {&spec.jumps, &spec.intersections})
    for (const auto& r : *m)
      for (long x : r) span = std::max(span, std::abs(x));
  const long pad = 2 * span;
  StripTuple strips;
  for (const auto& p : polys) strips.push_back(materialize(p, -pad, n + pad));
  StripTuple image = apply_universal(spec, strips);
  std::vector<TwistedPolygon> out;
  for (const auto& s : image) {
    std::vector<ProjPoint> vs;
    for (long k = 0; k < n; ++k) vs.push_back(s.at(k));
    TwistedPolygon q(std::move(vs), polys.front().monodromy());
    if (!is_generic(q)) throw DegenerateImage("image polygon is not in general position");
    out.push_back(std::move(q));
  }
  return out;
}

/// Random generic d-tuple of strips over a common window.
inline StripTuple random_strip_tuple(std::size_t d, std::size_t length, IntRange range, std::uint64_t seed,
                                     long lo = 0) {
  StripTuple out;
  for (std::size_t s = 0; s < d; ++s) out.push_back(random_strip(d, length, range, seed * 1000003ULL + s, lo));
  return out;
}

}  // namespace pentalab
