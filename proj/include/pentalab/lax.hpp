#pragma once

// Unit-determinant lifts of twisted polygons, the spectral L-matrices of the
// short-diagonal and dented maps, and conservation of the monodromy
// spectrum under one map step.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pentalab/bigfloat.hpp"
#include "pentalab/map_spec.hpp"
#include "pentalab/maps.hpp"

namespace pentalab {

struct LaxConfig {
  mpfr_prec_t precision = 512;
  double lift_tol = 1e-40;
  double conservation_tol = 1e-20;
  std::vector<Rational> lambdas = {Rational(1, 2), Rational(1), Rational(2)};
};

/// Which diagonal entry of D(lambda) carries lambda.
struct LaxVariant {
  enum Kind { ShortDiagonal, Dented } kind = ShortDiagonal;
  std::size_t m = 0;  // dented position, 1-based

  std::string name() const { return kind == ShortDiagonal ? "sh" : "dented:" + std::to_string(m); }
};

struct Lift {
  std::size_t d = 0, n = 0;
  mpfr_prec_t precision = 0;
  std::vector<Real> scales;      // t_j for j = 0..n-1, so that V~_j = t_j V_j
  Real mu{kMinPrecision};        // V~_{j+n} = mu M V~_j
  int monodromy_sign = 1;        // sign of mu; -1 is the flipped branch
  std::vector<std::vector<Real>> a;  // a[j][k-1] for k = 1..d
  double max_window_error = 0;   // max |det(V~_j..V~_{j+d}) - 1|
  double max_trailing_error = 0; // max |c_j - (-1)^d|
};

struct SpectralSample {
  Rational lambda;
  std::vector<Real> charpoly;  // monic, d+2 entries
};

namespace detail {

/// Solves A x = b over GF(2); nullopt when inconsistent.
inline std::optional<std::vector<std::uint8_t>> solve_gf2(std::vector<std::vector<std::uint8_t>> a,
                                                          std::vector<std::uint8_t> b) {
  const std::size_t rows = a.size(), cols = a.front().size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && !a[p][c]) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    for (std::size_t i = 0; i < rows; ++i)
      if (i != r && a[i][c]) {
        for (std::size_t k = 0; k < cols; ++k) a[i][k] ^= a[r][k];
        b[i] ^= b[r];
      }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i]) return std::nullopt;
  std::vector<std::uint8_t> x(cols, 0);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

/// Window of d+1 consecutive indices starting at j, reduced mod n, with the
/// number of indices that wrapped past n - 1.
inline std::size_t wraps(std::size_t j, std::size_t d, std::size_t n) {
  return j + d >= n ? j + d - n + 1 : 0;
}

}  // namespace detail

/// Real lift V~_j = t_j V_j of the canonical integer lifts with every window
/// determinant equal to 1 and V~_{j+n} = mu M V~_j.
inline Lift unit_det_lift(const TwistedPolygon& p, mpfr_prec_t precision = 512, double lift_tol = 1e-40) {
  const std::size_t d = p.dim(), n = p.size();
  if (std::gcd(n, d + 1) != 1)
    throw GcdObstruction("gcd(n, d+1) = " + std::to_string(std::gcd(n, d + 1)) + ", lift needs 1");

  // Integer lifts V_0 .. V_{n+d}, continued by the integer matrix M.
  const IMatrix& mono = p.monodromy().matrix();
  std::vector<IVector> v;
  for (const auto& x : p.vertices()) v.push_back(x.coords());
  for (std::size_t k = 0; k <= d; ++k) v.push_back(mono * v[k]);

  std::vector<Integer> dets(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<IVector> cols(v.begin() + static_cast<long>(j), v.begin() + static_cast<long>(j + d + 1));
    dets[j] = det(IMatrix::from_columns(cols));
    if (sgn(dets[j]) == 0) throw DegenerateImage("window determinant vanishes");
  }
  const Integer det_m = det(mono);

  // Log scales: sum_{window} u = -ln|D_j| - wraps_j * ln|mu|, ln|mu| = -ln|det M| / (d+1).
  QMatrix circ(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= d; ++i) circ(j, (j + i) % n) = 1;
  const QMatrix circ_inv = inverse(circ);
  const Real log_mu = -log(abs(Real(det_m, precision))) / Real(static_cast<long>(d + 1), precision);
  std::vector<Real> rhs;
  for (std::size_t j = 0; j < n; ++j)
    rhs.push_back(-log(abs(Real(dets[j], precision))) -
                  Real(static_cast<long>(detail::wraps(j, d, n)), precision) * log_mu);

  // Signs over GF(2): sum_{window} e = neg(D_j) + wraps_j * h, where h is the sign bit of mu and
  // (d+1) h = neg(det M) must hold.
  std::vector<std::vector<std::uint8_t>> gf(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= d; ++i) gf[j][(j + i) % n] ^= 1;
  std::optional<std::vector<std::uint8_t>> signs;
  int mu_sign = 1;
  for (int h : {0, 1}) {
    if (((d + 1) * static_cast<std::size_t>(h)) % 2 != static_cast<std::size_t>(sgn(det_m) < 0)) continue;
    std::vector<std::uint8_t> b(n);
    for (std::size_t j = 0; j < n; ++j)
      b[j] = static_cast<std::uint8_t>(((sgn(dets[j]) < 0) + detail::wraps(j, d, n) * h) % 2);
    signs = detail::solve_gf2(gf, b);
    if (signs) {
      mu_sign = h ? -1 : 1;
      break;
    }
  }
  if (!signs) throw SignObstruction("no real unit-determinant lift for either sign of the monodromy");

  Lift lift;
  lift.d = d;
  lift.n = n;
  lift.precision = precision;
  lift.monodromy_sign = mu_sign;
  lift.mu = exp(log_mu);
  if (mu_sign < 0) lift.mu = -lift.mu;
  for (std::size_t j = 0; j < n; ++j) {
    Real u(precision);
    for (std::size_t i = 0; i < n; ++i) {
      const Rational& c = circ_inv(j, i);
      if (sgn(c) != 0) u += Real(c, precision) * rhs[i];
    }
    Real t = exp(u);
    if ((*signs)[j]) t = -t;
    lift.scales.push_back(std::move(t));
  }
  // t_k for k = 0 .. n+d via t_{k+n} = mu t_k.
  auto scale = [&](std::size_t k) { return k < n ? lift.scales[k] : lift.mu * lift.scales[k - n]; };

  const Real one(1, precision);
  double worst = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Real prod(dets[j], precision);
    for (std::size_t i = j; i <= j + d; ++i) prod *= scale(i);
    worst = std::max(worst, abs(prod - one).to_double());
  }
  lift.max_window_error = worst;
  if (worst > lift_tol) throw IllConditioned("window determinants deviate from 1 by " + std::to_string(worst));

  // V_{j+d+1} = sum_{k=1..d} b_k V_{j+k} + b_0 V_j over the rationals, then rescale.
  v.push_back(mono * v[d + 1]);
  const Real trailing(d % 2 == 0 ? 1 : -1, precision);
  double worst_c = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<IVector> cols(v.begin() + static_cast<long>(j), v.begin() + static_cast<long>(j + d + 1));
    const QVector b = solve(IMatrix::from_columns(cols), v[j + d + 1]);
    const Real top = scale(j + d + 1);
    std::vector<Real> row;
    for (std::size_t k = 1; k <= d; ++k) row.push_back(Real(b[k], precision) * top / scale(j + k));
    const Real c = Real(b[0], precision) * top / scale(j);
    worst_c = std::max(worst_c, abs(c - trailing).to_double());
    lift.a.push_back(std::move(row));
  }
  lift.max_trailing_error = worst_c;
  if (worst_c > lift_tol) throw IllConditioned("trailing coefficient deviates from (-1)^d by " + std::to_string(worst_c));
  return lift;
}

/// N_j: first row (0, ..., 0, (-1)^d); rows 1..d hold D(lambda) in the first d
/// columns and a_{j,1..d} in the last. L_j = N_j^-1.
inline RealMatrix build_inner_matrix(const std::vector<Real>& a_j, const Real& lambda, LaxVariant variant,
                                     std::size_t d) {
  if (a_j.size() != d) throw UsageError("build_inner_matrix: expected d coefficients");
  if (lambda.is_zero()) throw UsageError("build_inner_matrix: lambda must be nonzero");
  if (variant.kind == LaxVariant::Dented && (variant.m < 1 || variant.m > d - 1))
    throw UsageError("build_inner_matrix: dented position must lie in 1..d-1");
  const mpfr_prec_t prec = lambda.precision();
  RealMatrix m(d + 1, prec);
  m(0, d) = Real(d % 2 == 0 ? 1 : -1, prec);
  for (std::size_t i = 0; i < d; ++i) {
    bool has_lambda;
    if (variant.kind == LaxVariant::ShortDiagonal)
      has_lambda = d % 2 == 1 ? i % 2 == 0 : i % 2 == 1;
    else
      has_lambda = i == variant.m;  // the (m+1)-th place
    m(i + 1, i) = has_lambda ? lambda : Real(1, prec);
    m(i + 1, d) = a_j[i];
  }
  return m;
}

/// Monic characteristic polynomial of (N_0 N_1 ... N_{n-1})^-1.
inline SpectralSample monodromy_charpoly(const Lift& lift, const Rational& lambda, LaxVariant variant) {
  const Real lam(lambda, lift.precision);
  RealMatrix q = RealMatrix::identity(lift.d + 1, lift.precision);
  for (std::size_t j = 0; j < lift.n; ++j) q = q * build_inner_matrix(lift.a[j], lam, variant, lift.d);
  return {lambda, characteristic_polynomial(inverse(std::move(q)))};
}

/// The Lax variant matching a generalized spec, if it has one.
inline std::optional<LaxVariant> lax_variant(const MapSpec& spec, std::size_t d) {
  const auto* g = std::get_if<Generalized>(&spec);
  if (!g || d < 2) return std::nullopt;
  if (*g == short_diagonal(d)) return LaxVariant{LaxVariant::ShortDiagonal, 0};
  for (std::size_t m = 1; m + 1 <= d; ++m)
    if (*g == dented(d, m)) return LaxVariant{LaxVariant::Dented, m};
  return std::nullopt;
}

struct LaxReport {
  std::string variant;
  std::size_t d = 0, n = 0;
  std::vector<Rational> lambdas;
  double max_rel_dev = 0;  // log10 of this can fall far below the double range; see log10_max_rel_dev
  double log10_max_rel_dev = 0;
  bool pass = false;
  mpfr_prec_t precision_bits = 0;
  int sign_before = 1, sign_after = 1;
};

/// Applies the map exactly, lifts both polygons and compares the spectral
/// samples coefficientwise.
inline LaxReport conservation_check(const TwistedPolygon& p, const MapSpec& spec, const LaxConfig& cfg = {}) {
  const auto variant = lax_variant(spec, p.dim());
  if (!variant) throw UsageError("Lax check covers only the short-diagonal and dented maps");
  const TwistedPolygon image = apply_polygon(spec, p);
  const Lift before = unit_det_lift(p, cfg.precision, cfg.lift_tol);
  const Lift after = unit_det_lift(image, cfg.precision, cfg.lift_tol);

  LaxReport r;
  r.variant = variant->name();
  r.d = p.dim();
  r.n = p.size();
  r.lambdas = cfg.lambdas;
  r.precision_bits = cfg.precision;
  r.sign_before = before.monodromy_sign;
  r.sign_after = after.monodromy_sign;
  Real worst(cfg.precision);
  for (const auto& lambda : cfg.lambdas) {
    const SpectralSample x = monodromy_charpoly(before, lambda, *variant);
    const SpectralSample y = monodromy_charpoly(after, lambda, *variant);
    for (std::size_t i = 0; i < x.charpoly.size(); ++i) {
      Real dev = relative_difference(x.charpoly[i], y.charpoly[i]);
      if (dev > worst) worst = std::move(dev);
    }
  }
  r.max_rel_dev = worst.to_double();
  r.log10_max_rel_dev = worst.log10_abs();
  r.pass = r.max_rel_dev <= cfg.conservation_tol;
  return r;
}

}  // namespace pentalab
