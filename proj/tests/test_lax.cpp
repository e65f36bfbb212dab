#include <gtest/gtest.h>

#include <random>

#include "pentalab/checks.hpp"

using namespace pentalab;

namespace {

constexpr mpfr_prec_t kPrec = 512;

// First seed from `seed` on whose polygon a real unit lift exists.
TwistedPolygon liftable(std::size_t d, std::size_t n, std::uint64_t seed) {
  for (;; ++seed) {
    TwistedPolygon p = random_twisted(d, n, {1, 10}, seed);
    try {
      unit_det_lift(p, kPrec);
      return p;
    } catch (const SignObstruction&) {
    }
  }
}

bool is_lambda(const RealMatrix& m, std::size_t r, std::size_t c, const Real& lambda) {
  return relative_difference(m(r, c), lambda).is_zero();
}

double max_dev(const std::vector<Real>& a, const std::vector<Real>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_difference(a[i], b[i]).to_double());
  return worst;
}

}  // namespace

TEST(InnerMatrix, DiagonalPatterns) {
  const Real lam(Rational(3, 7), kPrec), one(1, kPrec);
  auto coeffs = [](std::size_t d) { return std::vector<Real>(d, Real(5, kPrec)); };

  const RealMatrix sh3 = build_inner_matrix(coeffs(3), lam, {LaxVariant::ShortDiagonal, 0}, 3);
  EXPECT_TRUE(is_lambda(sh3, 1, 0, lam));
  EXPECT_TRUE(is_lambda(sh3, 2, 1, one));
  EXPECT_TRUE(is_lambda(sh3, 3, 2, lam));
  EXPECT_EQ(sh3(0, 3).to_double(), -1.0);
  EXPECT_EQ(sh3(2, 3).to_double(), 5.0);
  EXPECT_TRUE(sh3(0, 0).is_zero());

  const RealMatrix sh2 = build_inner_matrix(coeffs(2), lam, {LaxVariant::ShortDiagonal, 0}, 2);
  EXPECT_TRUE(is_lambda(sh2, 1, 0, one));
  EXPECT_TRUE(is_lambda(sh2, 2, 1, lam));
  EXPECT_EQ(sh2(0, 2).to_double(), 1.0);

  const RealMatrix t1 = build_inner_matrix(coeffs(3), lam, {LaxVariant::Dented, 1}, 3);
  EXPECT_TRUE(is_lambda(t1, 1, 0, one));
  EXPECT_TRUE(is_lambda(t1, 2, 1, lam));
  EXPECT_TRUE(is_lambda(t1, 3, 2, one));

  EXPECT_THROW(build_inner_matrix(coeffs(3), Real(0, kPrec), {LaxVariant::ShortDiagonal, 0}, 3), UsageError);
}

TEST(Lift, UnitWindowsAndTrailingCoefficient) {
  for (std::size_t d : {2u, 3u})
    for (std::uint64_t seed : {1u, 40u, 80u}) {
      const Lift lift = unit_det_lift(liftable(d, 11, seed), kPrec);
      EXPECT_LE(lift.max_window_error, 1e-40);
      EXPECT_LE(lift.max_trailing_error, 1e-40);
      EXPECT_EQ(lift.a.size(), 11u);
      EXPECT_EQ(lift.a.front().size(), d);
    }
}

TEST(Lift, GcdObstruction) {
  EXPECT_THROW(unit_det_lift(random_twisted(3, 12, {1, 10}, 1), kPrec), GcdObstruction);
  EXPECT_THROW(unit_det_lift(random_twisted(2, 12, {1, 10}, 1), kPrec), GcdObstruction);
}

TEST(Charpoly, SimilarityInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> dist(-9, 9);
  for (int t = 0; t < 20; ++t) {
    RealMatrix a(4, kPrec), g(4, kPrec);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        a(r, c) = Real(dist(rng), kPrec);
        g(r, c) = Real(dist(rng), kPrec);
      }
    RealMatrix conj = g * a;
    try {
      conj = conj * inverse(g);
    } catch (const IllConditioned&) {
      continue;
    }
    EXPECT_LT(max_dev(characteristic_polynomial(a), characteristic_polynomial(conj)), 1e-120);
  }
}

TEST(Charpoly, ConstantTermIsDeterminant) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> dist(-9, 9);
  for (std::size_t n = 2; n <= 5; ++n) {
    IMatrix exact(n, n);
    RealMatrix a(n, kPrec);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        exact(r, c) = dist(rng);
        a(r, c) = Real(exact(r, c), kPrec);
      }
    const auto cp = characteristic_polynomial(a);
    ASSERT_EQ(cp.size(), n + 1);
    EXPECT_EQ(cp.front().to_double(), 1.0);
    const Real d = n % 2 ? -cp.back() : cp.back();
    EXPECT_LT(relative_difference(d, Real(det(exact), kPrec)).to_double(), 1e-100);
  }
}

TEST(Conservation, ShortDiagonalPlane) {
  const LaxOutcome o = lax_trial(short_diagonal(2), 2, 11, 1);
  EXPECT_TRUE(o.report.pass);
  EXPECT_LT(o.report.log10_max_rel_dev, -20);
  EXPECT_EQ(o.report.variant, "sh");
}

TEST(Conservation, DentedSpace) {
  for (std::size_t m : {1u, 2u}) {
    const LaxOutcome o = lax_trial(dented(3, m), 3, 11, 7);
    EXPECT_TRUE(o.report.pass) << m;
    EXPECT_EQ(o.report.variant, "dented:" + std::to_string(m));
  }
}

TEST(Conservation, PrecisionScaling) {
  LaxConfig lo, hi;
  hi.precision = 1024;
  const TwistedPolygon p = liftable(2, 11, 2);
  const LaxReport a = conservation_check(p, short_diagonal(2), lo);
  const LaxReport b = conservation_check(p, short_diagonal(2), hi);
  EXPECT_LE(b.log10_max_rel_dev, a.log10_max_rel_dev - 10);
}

TEST(Conservation, NegativeControl) {
  const TwistedPolygon p = liftable(2, 11, 1), q = liftable(2, 11, 500);
  const Lift a = unit_det_lift(p, kPrec), b = unit_det_lift(q, kPrec);
  const LaxVariant sh{LaxVariant::ShortDiagonal, 0};
  EXPECT_GT(max_dev(monodromy_charpoly(a, 1, sh).charpoly, monodromy_charpoly(b, 1, sh).charpoly), 1e-3);
}

TEST(Conservation, ShiftInvariance) {
  const TwistedPolygon p = liftable(3, 11, 3);
  const Lift a = unit_det_lift(p, kPrec);
  const LaxVariant sh{LaxVariant::ShortDiagonal, 0};
  int compared = 0;
  for (long s : {1L, 2L, 5L}) {
    Lift b;
    try {
      b = unit_det_lift(shift(p, s), kPrec);
    } catch (const SignObstruction&) {
      continue;
    }
    ++compared;
    for (const Rational& lambda : {Rational(1, 2), Rational(2)})
      EXPECT_LT(max_dev(monodromy_charpoly(a, lambda, sh).charpoly, monodromy_charpoly(b, lambda, sh).charpoly),
                1e-20);
  }
  EXPECT_GT(compared, 0);
}

TEST(Conservation, OnlyCoveredVariants) {
  const TwistedPolygon p = random_twisted(3, 11, {1, 10}, 1);
  EXPECT_THROW(conservation_check(p, Generalized{{2, 3}, {1, 1}}), UsageError);
  EXPECT_FALSE(lax_variant(Generalized{{1, 3}, {1, 1}}, 3).has_value());
  EXPECT_TRUE(lax_variant(dented(3, 2), 3).has_value());
}
