#pragma once

// Twisted polygons, finite vertex strips and their projective invariants.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pentalab/projective.hpp"

namespace pentalab {

/// Inclusive integer range for random coordinates or coefficients.
struct IntRange {
  long lo = 1;
  long hi = 10;
};

/// A finite window [lo, lo + size) of a bi-infinite vertex sequence.
class VertexStrip {
 public:
  VertexStrip() = default;
  VertexStrip(long lo, std::vector<ProjPoint> vertices) : lo_(lo), vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw UsageError("VertexStrip: empty window");
    for (const auto& v : vertices_)
      if (v.dim() != vertices_.front().dim()) throw UsageError("VertexStrip: mixed dimensions");
  }

  std::size_t dim() const { return vertices_.front().dim(); }
  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return lo_ + static_cast<long>(vertices_.size()); }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool contains(long k) const noexcept { return k >= lo() && k < hi(); }

  const ProjPoint& at(long k) const {
    if (!contains(k))
      throw WindowExceeded("index " + std::to_string(k) + " outside [" + std::to_string(lo()) + ", " +
                           std::to_string(hi()) + ")");
    return vertices_[static_cast<std::size_t>(k - lo_)];
  }
  const std::vector<ProjPoint>& vertices() const noexcept { return vertices_; }

  /// True iff every d+1 consecutive vertices are in general position.
  bool is_generic() const {
    const std::size_t d = dim();
    for (std::size_t k = 0; k + d < vertices_.size(); ++k)
      if (!in_general_position(std::span(vertices_).subspan(k, d + 1))) return false;
    return true;
  }

  friend bool operator==(const VertexStrip&, const VertexStrip&) = default;

 private:
  long lo_ = 0;
  std::vector<ProjPoint> vertices_;
};

/// A twisted n-gon: vertices v_0..v_{n-1} and a monodromy M with
/// v_{k+n} = M v_k.
class TwistedPolygon {
 public:
  TwistedPolygon() = default;
  TwistedPolygon(std::vector<ProjPoint> vertices, ProjMap monodromy)
      : vertices_(std::move(vertices)), monodromy_(std::move(monodromy)) {
    if (vertices_.empty()) throw UsageError("TwistedPolygon: no vertices");
    const std::size_t d = monodromy_.dim();
    for (const auto& v : vertices_)
      if (v.dim() != d) throw UsageError("TwistedPolygon: vertex dimension differs from monodromy");
    if (vertices_.size() <= d + 2) throw UsageError("TwistedPolygon: need n > d + 2");
  }

  std::size_t dim() const { return monodromy_.dim(); }
  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<ProjPoint>& vertices() const noexcept { return vertices_; }
  const ProjMap& monodromy() const noexcept { return monodromy_; }

  friend bool operator==(const TwistedPolygon&, const TwistedPolygon&) = default;

 private:
  std::vector<ProjPoint> vertices_;
  ProjMap monodromy_;
};

namespace detail {

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Vertices v_lo..v_{hi-1} of the bi-infinite sequence, each period obtained
/// from its neighbour by one application of M or M^-1.
inline VertexStrip materialize(const TwistedPolygon& p, long lo, long hi) {
  if (hi <= lo) throw UsageError("materialize: empty window");
  const long n = static_cast<long>(p.size());
  std::vector<ProjPoint> out;
  out.reserve(static_cast<std::size_t>(hi - lo));
  std::optional<IMatrix> inv;
  // Per period, starting from the stored one and walking outwards.
  const long first_period = detail::floor_div(lo, n);
  const long last_period = detail::floor_div(hi - 1, n);
  std::vector<std::vector<ProjPoint>> periods(static_cast<std::size_t>(last_period - first_period + 1));
  auto slot = [&](long q) -> std::vector<ProjPoint>& { return periods[static_cast<std::size_t>(q - first_period)]; };
  std::vector<ProjPoint> cur = p.vertices();
  if (0 >= first_period && 0 <= last_period) slot(0) = cur;
  for (long q = 1; q <= last_period; ++q) {
    for (auto& v : cur) v = ProjPoint(p.monodromy().matrix() * v.coords());
    if (q >= first_period) slot(q) = cur;
  }
  cur = p.vertices();
  for (long q = -1; q >= first_period; --q) {
    if (!inv) inv = scaled_inverse(p.monodromy().matrix()).first;
    for (auto& v : cur) v = ProjPoint(*inv * v.coords());
    if (q <= last_period) slot(q) = cur;
  }
  for (long k = lo; k < hi; ++k) {
    const long q = detail::floor_div(k, n);
    out.push_back(slot(q)[static_cast<std::size_t>(k - q * n)]);
  }
  return VertexStrip(lo, std::move(out));
}

/// v_k for any integer k.
inline ProjPoint vertex(const TwistedPolygon& p, long k) { return materialize(p, k, k + 1).at(k); }

/// Every window of d+1 consecutive vertices, wrapped through the monodromy,
/// is in general position.
inline bool is_generic(const TwistedPolygon& p) {
  return materialize(p, 0, static_cast<long>(p.size() + p.dim())).is_generic();
}

/// Every (d+1)-subset of v_0..v_{d+1} is independent.
inline bool has_frame(std::span<const ProjPoint> first) {
  try {
    frame_transform(first);
    return true;
  } catch (const DegenerateFrame&) {
    return false;
  }
}

/// v'_k = v_{k+s}.
inline VertexStrip shift(const VertexStrip& s, long by) { return VertexStrip(s.lo() - by, s.vertices()); }

inline TwistedPolygon shift(const TwistedPolygon& p, long by) {
  const long n = static_cast<long>(p.size());
  return TwistedPolygon(materialize(p, by, by + n).vertices(), p.monodromy());
}

/// Applies g to every vertex and conjugates the monodromy.
inline TwistedPolygon transform(const ProjMap& g, const TwistedPolygon& p) {
  std::vector<ProjPoint> vs;
  vs.reserve(p.size());
  for (const auto& v : p.vertices()) vs.push_back(apply_map(g, v));
  return TwistedPolygon(std::move(vs), conjugate(g, p.monodromy()));
}

inline VertexStrip transform(const ProjMap& g, const VertexStrip& s) {
  std::vector<ProjPoint> vs;
  vs.reserve(s.size());
  for (const auto& v : s.vertices()) vs.push_back(apply_map(g, v));
  return VertexStrip(s.lo(), std::move(vs));
}

// ---------------------------------------------------------------------------
// Random generation

namespace detail {

inline constexpr int kMaxRejectionRounds = 100;

inline IVector random_vector(std::mt19937_64& rng, std::size_t len, IntRange range) {
  std::uniform_int_distribution<long> dist(range.lo, range.hi);
  IVector v(len);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace detail

/// A random twisted n-gon: n integer lift vectors plus d+1 more forming the
/// monodromy columns, all uniform in `range`. Rejects until every window of
/// d+1 consecutive vertices is generic and v_0..v_{d+1} form a frame.
inline TwistedPolygon random_twisted(std::size_t d, std::size_t n, IntRange range, std::uint64_t seed) {
  if (d < 1) throw UsageError("random_twisted: d must be positive");
  if (n <= d + 2) throw UsageError("random_twisted: need n > d + 2");
  std::mt19937_64 rng(seed);
  for (int round = 0; round < detail::kMaxRejectionRounds; ++round) {
    std::vector<IVector> lifts;
    for (std::size_t i = 0; i < n; ++i) lifts.push_back(detail::random_vector(rng, d + 1, range));
    std::vector<IVector> cols;
    for (std::size_t i = 0; i <= d; ++i) cols.push_back(detail::random_vector(rng, d + 1, range));
    try {
      std::vector<ProjPoint> vs;
      for (auto& l : lifts) vs.emplace_back(std::move(l));
      TwistedPolygon p(std::move(vs), ProjMap(IMatrix::from_columns(cols)));
      if (is_generic(p) && has_frame(std::span(p.vertices()).first(d + 2))) return p;
    } catch (const DegeneracyError&) {
      // singular monodromy or a zero vector; draw again
    }
  }
  throw GenerationFailed("no generic twisted polygon after " + std::to_string(detail::kMaxRejectionRounds) +
                         " rounds");
}

/// As above with a prescribed monodromy; only the n vertices are drawn.
inline TwistedPolygon random_twisted(const ProjMap& monodromy, std::size_t n, IntRange range, std::uint64_t seed) {
  const std::size_t d = monodromy.dim();
  if (n <= d + 2) throw UsageError("random_twisted: need n > d + 2");
  std::mt19937_64 rng(seed);
  for (int round = 0; round < detail::kMaxRejectionRounds; ++round) {
    try {
      std::vector<ProjPoint> vs;
      for (std::size_t i = 0; i < n; ++i) vs.emplace_back(detail::random_vector(rng, d + 1, range));
      TwistedPolygon p(std::move(vs), monodromy);
      if (is_generic(p) && has_frame(std::span(p.vertices()).first(d + 2))) return p;
    } catch (const ZeroVector&) {
    }
  }
  throw GenerationFailed("no generic twisted polygon after " + std::to_string(detail::kMaxRejectionRounds) +
                         " rounds");
}

/// A random generic strip over [lo, lo + length) with integer coordinates.
inline VertexStrip random_strip(std::size_t d, std::size_t length, IntRange range, std::uint64_t seed,
                                long lo = 0) {
  if (length < d + 1) throw UsageError("random_strip: window shorter than d+1");
  std::mt19937_64 rng(seed);
  for (int round = 0; round < detail::kMaxRejectionRounds; ++round) {
    std::vector<ProjPoint> vs;
    try {
      for (std::size_t i = 0; i < length; ++i) vs.emplace_back(detail::random_vector(rng, d + 1, range));
      VertexStrip s(lo, std::move(vs));
      if (s.is_generic()) return s;
    } catch (const ZeroVector&) {
    }
  }
  throw GenerationFailed("no generic strip after " + std::to_string(detail::kMaxRejectionRounds) + " rounds");
}

/// A strip whose quadruples v_{k-1}, v_k, v_{k+d-1}, v_{k+d} span planes,
/// together with the exact relation coefficients
/// v_{k+d} = c0 v_{k-1} + c1 v_k + c2 v_{k+d-1} on canonical lifts.
struct CorrugationWitness {
  VertexStrip strip;
  /// Indexed by k - (strip.lo() + 1), for every k with the quadruple inside the window.
  std::vector<std::array<Rational, 3>> coefficients;
};

/// Exact coefficients of v_{k+d} in span(v_{k-1}, v_k, v_{k+d-1}); throws
/// DegenerateSpan if the quadruple does not span exactly a plane.
inline std::array<Rational, 3> corrugation_coefficients(const VertexStrip& s, long k) {
  const long d = static_cast<long>(s.dim());
  std::vector<IVector> cols = {s.at(k - 1).coords(), s.at(k).coords(), s.at(k + d - 1).coords(),
                               s.at(k + d).coords()};
  auto basis = nullspace(IMatrix::from_columns(cols));
  if (basis.size() != 1 || sgn(basis[0][3]) == 0)
    throw DegenerateSpan("quadruple at k=" + std::to_string(k) + " is not a corrugation plane");
  const auto& c = basis[0];
  std::array<Rational, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = Rational(-c[i], c[3]);
    out[i].canonicalize();
  }
  return out;
}

inline CorrugationWitness corrugation_witness(VertexStrip s) {
  CorrugationWitness w;
  const long d = static_cast<long>(s.dim());
  for (long k = s.lo() + 1; k + d < s.hi(); ++k) w.coefficients.push_back(corrugation_coefficients(s, k));
  w.strip = std::move(s);
  return w;
}

/// Random corrugated strip in P^d (d >= 3) of the given length.
inline CorrugationWitness random_corrugated_strip(std::size_t d, std::size_t length, IntRange coeff_range,
                                                  std::uint64_t seed, IntRange coord_range = {1, 10}) {
  if (d < 3) throw UsageError("random_corrugated_strip: d must be at least 3");
  if (length < 2 * d + 4) throw UsageError("random_corrugated_strip: length must be at least 2d+4");
  if (coeff_range.lo <= 0 && coeff_range.hi >= 0 && coeff_range.lo == coeff_range.hi)
    throw UsageError("random_corrugated_strip: coefficient range contains only zero");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coeff(coeff_range.lo, coeff_range.hi);
  auto nonzero = [&] {
    long c = 0;
    while (c == 0) c = coeff(rng);
    return c;
  };
  for (int round = 0; round < detail::kMaxRejectionRounds; ++round) {
    std::vector<IVector> lifts;
    for (std::size_t i = 0; i <= d; ++i) lifts.push_back(detail::random_vector(rng, d + 1, coord_range));
    while (lifts.size() < length) {
      // new vertex has index j = k + d with k = j - d.
      const std::size_t j = lifts.size();
      const IVector& a = lifts[j - d - 1];
      const IVector& b = lifts[j - d];
      const IVector& c = lifts[j - 1];
      const long ca = nonzero(), cb = nonzero(), cc = nonzero();
      IVector v(d + 1);
      for (std::size_t r = 0; r <= d; ++r) v[r] = ca * a[r] + cb * b[r] + cc * c[r];
      if (is_zero(v)) break;
      canonicalize(v);
      lifts.push_back(std::move(v));
    }
    if (lifts.size() < length) continue;
    std::vector<ProjPoint> vs;
    for (auto& l : lifts) vs.emplace_back(std::move(l));
    VertexStrip s(0, std::move(vs));
    if (!s.is_generic()) continue;
    try {
      return corrugation_witness(std::move(s));
    } catch (const DegenerateSpan&) {
    }
  }
  throw GenerationFailed("no generic corrugated strip after " + std::to_string(detail::kMaxRejectionRounds) +
                         " rounds");
}

// ---------------------------------------------------------------------------
// Invariant coordinates and heights

/// The polygon moved so that v_0..v_{d+1} become the standard projective
/// frame. Two polygons are projectively equivalent iff their normal forms
/// coincide.
///
/// With A = [v_0 .. v_d], B = adj-scaled A^-1 and weights w = B v_{d+1}, the
/// frame map is diag(1/w) B and its inverse A diag(w), so vertex k becomes
/// (B v_k)_i / w_i and the monodromy (B M A)_ij w_j / w_i.
inline TwistedPolygon normal_form(const TwistedPolygon& p) {
  const std::size_t d = p.dim();
  const auto& vs = p.vertices();
  std::vector<IVector> cols;
  for (std::size_t i = 0; i <= d; ++i) cols.push_back(vs[i].coords());
  const IMatrix a = IMatrix::from_columns(cols);
  IMatrix b;
  try {
    b = scaled_inverse(a).first;
  } catch (const SingularMatrix&) {
    throw DegenerateFrame("first d+1 vertices are dependent");
  }
  const IVector w = b * vs[d + 1].coords();
  for (const auto& x : w)
    if (sgn(x) == 0) throw DegenerateFrame("vertex d+1 lies on a coordinate hyperplane of the frame");
  // cofactor[i] = prod_{j != i} w_j
  IVector cofactor(d + 1, Integer(1));
  {
    Integer prefix = 1;
    for (std::size_t i = 0; i <= d; ++i) {
      cofactor[i] = prefix;
      prefix *= w[i];
    }
    Integer suffix = 1;
    for (std::size_t i = d + 1; i-- > 0;) {
      cofactor[i] *= suffix;
      suffix *= w[i];
    }
  }

  std::vector<ProjPoint> out;
  out.reserve(vs.size());
  for (std::size_t i = 0; i <= d; ++i) {
    IVector e(d + 1, Integer(0));
    e[i] = 1;
    out.push_back(ProjPoint::from_canonical(std::move(e)));
  }
  out.push_back(ProjPoint::from_canonical(IVector(d + 1, Integer(1))));
  for (std::size_t k = d + 2; k < vs.size(); ++k) {
    IVector u = b * vs[k].coords();
    for (std::size_t i = 0; i <= d; ++i) u[i] *= cofactor[i];
    out.push_back(ProjPoint(std::move(u)));
  }
  IMatrix m = b * p.monodromy().matrix() * a;
  for (std::size_t i = 0; i <= d; ++i)
    for (std::size_t j = 0; j <= d; ++j) m(i, j) *= w[j] * cofactor[i];
  return TwistedPolygon(std::move(out), ProjMap::from_invertible(std::move(m)));
}

/// Complete projective invariant: the normal-form vertices v_{d+2..n-1}
/// followed by the normal-form monodromy entries, all as coprime integers.
inline QVector canonical_invariants(const TwistedPolygon& p) {
  const TwistedPolygon nf = normal_form(p);
  QVector out;
  for (std::size_t k = p.dim() + 2; k < nf.size(); ++k)
    for (const auto& x : nf.vertices()[k].coords()) out.emplace_back(x);
  for (const auto& x : nf.monodromy().matrix().entries()) out.emplace_back(x);
  return out;
}

/// Height of a polygon already in normal form.
inline Integer normal_form_height(const TwistedPolygon& nf) {
  Integer h = 1;
  for (std::size_t k = nf.dim() + 2; k < nf.size(); ++k)
    for (const auto& x : nf.vertices()[k].coords())
      if (mpz_cmpabs(x.get_mpz_t(), h.get_mpz_t()) > 0) h = abs(x);
  for (const auto& x : nf.monodromy().matrix().entries())
    if (mpz_cmpabs(x.get_mpz_t(), h.get_mpz_t()) > 0) h = abs(x);
  return h;
}

/// Max height over canonical_invariants.
inline Integer polygon_height(const TwistedPolygon& p) { return normal_form_height(normal_form(p)); }

// ---------------------------------------------------------------------------
// Equality up to index shift

inline bool projectively_equal(const TwistedPolygon& a, const TwistedPolygon& b) { return a == b; }
inline bool projectively_equal(const VertexStrip& a, const VertexStrip& b) { return a == b; }

/// Least number of overlapping vertices for a shift comparison of strips.
inline std::size_t min_overlap(std::size_t d) { return d + 2; }

/// True iff b_k = a_{k+s} on the common window, which must hold at least
/// min_overlap(d) vertices.
inline bool equal_with_shift(const VertexStrip& a, const VertexStrip& b, long s) {
  if (a.dim() != b.dim()) return false;
  const long lo = std::max(b.lo(), a.lo() - s);
  const long hi = std::min(b.hi(), a.hi() - s);
  if (hi - lo < static_cast<long>(min_overlap(a.dim()))) return false;
  for (long k = lo; k < hi; ++k)
    if (!(b.at(k) == a.at(k + s))) return false;
  return true;
}

inline bool equal_with_shift(const TwistedPolygon& a, const TwistedPolygon& b, long s) {
  if (a.dim() != b.dim() || a.size() != b.size() || !(a.monodromy() == b.monodromy())) return false;
  const long n = static_cast<long>(a.size());
  const VertexStrip sa = materialize(a, s, s + n);
  for (long k = 0; k < n; ++k)
    if (!(b.vertices()[static_cast<std::size_t>(k)] == sa.at(k + s))) return false;
  return true;
}

/// The s with b = shift(a, s), searched by increasing |s| (negative first)
/// up to max_shift.
template <typename Seq>
std::optional<long> equal_up_to_shift(const Seq& a, const Seq& b, long max_shift) {
  for (long m = 0; m <= max_shift; ++m) {
    if (equal_with_shift(a, b, -m)) return -m;
    if (m != 0 && equal_with_shift(a, b, m)) return m;
  }
  return std::nullopt;
}

}  // namespace pentalab
