#pragma once

// Exact projective geometry in P^d over the rationals. Points and
// hyperplanes are stored as canonical homogeneous integer vectors, so
// projective equality is plain vector equality.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pentalab/exact_linalg.hpp"

namespace pentalab {

namespace detail {
struct PointTag {};
struct CovectorTag {};
}  // namespace detail

/// A canonical homogeneous vector of length d+1. The tag separates points
/// from hyperplanes; `reinterpret` crosses between P^d and its dual.
template <typename Tag>
class Homogeneous {
 public:
  Homogeneous() = default;

  /// Canonicalizes; throws ZeroVector on the zero vector.
  explicit Homogeneous(IVector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw UsageError("homogeneous vector needs at least 2 entries");
    canonicalize(coords_);
  }
  Homogeneous(std::initializer_list<long> coords) : Homogeneous(to_ivector(coords)) {}

  static Homogeneous from_rational(std::span<const Rational> v) {
    return Homogeneous(canonical_homogeneous(v));
  }

  /// Adopts coordinates that are already canonical; no gcd is taken.
  static Homogeneous from_canonical(IVector coords) {
    Homogeneous h;
    h.coords_ = std::move(coords);
    return h;
  }

  std::size_t dim() const noexcept { return coords_.size() - 1; }
  const IVector& coords() const noexcept { return coords_; }

  template <typename Other>
  Homogeneous<Other> reinterpret() const {
    return Homogeneous<Other>(coords_);
  }

  friend bool operator==(const Homogeneous&, const Homogeneous&) = default;

 private:
  static IVector to_ivector(std::initializer_list<long> c) {
    IVector v;
    for (long x : c) v.emplace_back(x);
    return v;
  }

  IVector coords_;
};

using ProjPoint = Homogeneous<detail::PointTag>;
using Hyperplane = Homogeneous<detail::CovectorTag>;

inline Hyperplane as_hyperplane(const ProjPoint& p) { return p.reinterpret<detail::CovectorTag>(); }
inline ProjPoint as_point(const Hyperplane& h) { return h.reinterpret<detail::PointTag>(); }

/// Incidence pairing; zero iff the point lies on the hyperplane.
inline Integer pairing(const Hyperplane& h, const ProjPoint& p) {
  if (h.dim() != p.dim()) throw UsageError("pairing: dimension mismatch");
  return dot(h.coords(), p.coords());
}

/// An invertible projective transformation, stored as an integer matrix
/// scaled to coprime entries with the first nonzero entry positive.
class ProjMap {
 public:
  ProjMap() = default;
  explicit ProjMap(IMatrix m) : m_(std::move(m)) {
    if (!m_.square() || m_.rows() < 2) throw UsageError("ProjMap: matrix must be square of size >= 2");
    if (sgn(det(m_)) == 0) throw SingularMatrix("projective map must be invertible");
    normalize();
  }
  explicit ProjMap(const QMatrix& m) : ProjMap(clear(m)) {}

  static ProjMap identity(std::size_t d) { return ProjMap(IMatrix::identity(d + 1)); }

  /// Canonical scaling only; the caller guarantees invertibility.
  static ProjMap from_invertible(IMatrix m) {
    ProjMap g;
    g.m_ = std::move(m);
    g.normalize();
    return g;
  }

  std::size_t dim() const noexcept { return m_.rows() - 1; }
  const IMatrix& matrix() const noexcept { return m_; }

  ProjMap inverse() const { return from_invertible(scaled_inverse(m_).first); }

  friend ProjMap operator*(const ProjMap& a, const ProjMap& b) { return from_invertible(a.m_ * b.m_); }
  friend bool operator==(const ProjMap&, const ProjMap&) = default;

 private:
  static IMatrix clear(const QMatrix& m) {
    std::vector<Rational> flat(m.entries());
    std::vector<Integer> cleared(flat.size());
    clear_denominators(flat, cleared);
    return IMatrix(m.rows(), m.cols(), std::move(cleared));
  }
  void normalize() {
    std::vector<Integer> flat(m_.entries());
    canonicalize(flat);
    m_ = IMatrix(m_.rows(), m_.cols(), std::move(flat));
  }

  IMatrix m_;
};

// ---------------------------------------------------------------------------
// Actions

inline ProjPoint apply_map(const ProjMap& g, const ProjPoint& p) {
  if (g.dim() != p.dim()) throw UsageError("apply_map: dimension mismatch");
  return ProjPoint(g.matrix() * p.coords());
}

/// Image of a hyperplane: the covector transforms by the inverse transpose.
inline Hyperplane apply_map(const ProjMap& g, const Hyperplane& h) {
  if (g.dim() != h.dim()) throw UsageError("apply_map: dimension mismatch");
  const IMatrix adj = scaled_inverse(g.matrix()).first;
  return Hyperplane(adj.transpose() * h.coords());
}

/// g * m * g^-1.
inline ProjMap conjugate(const ProjMap& g, const ProjMap& m) {
  if (g.dim() != m.dim()) throw UsageError("conjugate: dimension mismatch");
  return ProjMap::from_invertible(g.matrix() * m.matrix() * scaled_inverse(g.matrix()).first);
}

// ---------------------------------------------------------------------------
// Incidence constructions

namespace detail {

template <typename T>
std::vector<IVector> coords_of(std::span<const T> xs) {
  std::vector<IVector> rows;
  rows.reserve(xs.size());
  for (const auto& x : xs) rows.push_back(x.coords());
  return rows;
}

template <typename T>
void check_count(std::span<const T> xs, std::size_t expected, const char* who) {
  if (xs.size() != expected) throw UsageError(std::string(who) + ": wrong number of inputs");
  for (const auto& x : xs)
    if (x.dim() != expected) throw UsageError(std::string(who) + ": dimension mismatch");
}

}  // namespace detail

/// The hyperplane through d points of P^d.
inline Hyperplane span_hyperplane(std::span<const ProjPoint> points) {
  if (points.empty()) throw UsageError("span_hyperplane: no points");
  detail::check_count(points, points.front().dim(), "span_hyperplane");
  IVector k = kernel_vector(detail::coords_of(points));
  if (is_zero(k)) throw DegenerateSpan("points are projectively dependent");
  return Hyperplane(std::move(k));
}

/// The common point of d hyperplanes of P^d.
inline ProjPoint meet_hyperplanes(std::span<const Hyperplane> planes) {
  if (planes.empty()) throw UsageError("meet_hyperplanes: no hyperplanes");
  detail::check_count(planes, planes.front().dim(), "meet_hyperplanes");
  IVector k = kernel_vector(detail::coords_of(planes));
  if (is_zero(k)) throw DegenerateMeet("hyperplanes are dependent");
  return ProjPoint(std::move(k));
}

/// The single point of span(a) and span(b). Complementary configurations
/// (|a| + |b| = d + 2) go through signed minors; anything else, and the
/// degenerate complementary case, through the general nullspace, which must
/// be one-dimensional.
inline ProjPoint meet_spans(std::span<const ProjPoint> a, std::span<const ProjPoint> b) {
  if (a.empty() || b.empty()) throw UsageError("meet_spans: empty span");
  const std::size_t d = a.front().dim();
  for (const auto& p : a)
    if (p.dim() != d) throw UsageError("meet_spans: dimension mismatch");
  for (const auto& p : b)
    if (p.dim() != d) throw UsageError("meet_spans: dimension mismatch");
  const std::size_t unknowns = a.size() + b.size();

  auto combine = [&](const IVector& coeffs) {
    IVector pt(d + 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t r = 0; r <= d; ++r) pt[r] += coeffs[i] * a[i].coords()[r];
    if (is_zero(pt)) throw DegenerateMeet("first span is dependent");
    return ProjPoint(std::move(pt));
  };

  if (unknowns == d + 2) {
    // Rows of the (d+1) x (d+2) system [a | -b].
    std::vector<IVector> rows(d + 1, IVector(unknowns));
    for (std::size_t r = 0; r <= d; ++r) {
      for (std::size_t i = 0; i < a.size(); ++i) rows[r][i] = a[i].coords()[r];
      for (std::size_t j = 0; j < b.size(); ++j) rows[r][a.size() + j] = -b[j].coords()[r];
    }
    IVector k = kernel_vector(rows);
    if (!is_zero(k)) return combine(k);
  }

  IMatrix sys(d + 1, unknowns);
  for (std::size_t r = 0; r <= d; ++r) {
    for (std::size_t i = 0; i < a.size(); ++i) sys(r, i) = a[i].coords()[r];
    for (std::size_t j = 0; j < b.size(); ++j) sys(r, a.size() + j) = -b[j].coords()[r];
  }
  auto basis = nullspace(std::move(sys));
  if (basis.size() != 1)
    throw DegenerateMeet(basis.empty() ? "spans do not meet"
                                       : "spans meet in a subspace of positive dimension");
  return combine(basis.front());
}

inline bool in_general_position(std::span<const ProjPoint> points) {
  if (points.empty() || points.size() != points.front().dim() + 1)
    throw UsageError("in_general_position: expected d+1 points");
  return sgn(det(IMatrix::from_columns(detail::coords_of(points)))) != 0;
}

/// The projective map sending pts[0..d] to the coordinate points and pts[d+1]
/// to (1:...:1).
inline ProjMap frame_transform(std::span<const ProjPoint> pts) {
  if (pts.size() < 3) throw UsageError("frame_transform: expected d+2 points");
  const std::size_t d = pts.front().dim();
  if (pts.size() != d + 2) throw UsageError("frame_transform: expected d+2 points");
  std::vector<IVector> cols;
  for (std::size_t i = 0; i <= d; ++i) {
    if (pts[i].dim() != d) throw UsageError("frame_transform: dimension mismatch");
    cols.push_back(pts[i].coords());
  }
  IMatrix basis = IMatrix::from_columns(cols);
  IMatrix inv;
  try {
    inv = scaled_inverse(basis).first;
  } catch (const SingularMatrix&) {
    throw DegenerateFrame("first d+1 points are dependent");
  }
  // inv * pts[d+1] gives the frame weights; each must be nonzero.
  const IVector w = inv * pts[d + 1].coords();
  for (const auto& x : w)
    if (sgn(x) == 0) throw DegenerateFrame("last point lies on a coordinate hyperplane of the frame");
  IMatrix g(d + 1, d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    Integer scale = 1;
    for (std::size_t j = 0; j <= d; ++j)
      if (j != i) scale *= w[j];
    for (std::size_t c = 0; c <= d; ++c) g(i, c) = inv(i, c) * scale;
  }
  return ProjMap(std::move(g));
}

}  // namespace pentalab
