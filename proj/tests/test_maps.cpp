#include <gtest/gtest.h>

#include <random>

#include "pentalab/checks.hpp"
#include "pentalab/io.hpp"

using namespace pentalab;

namespace {

Hyperplane through(const VertexStrip& s, std::initializer_list<long> ks) {
  std::vector<ProjPoint> pts;
  for (long k : ks) pts.push_back(s.at(k));
  return span_hyperplane(pts);
}

// Runs f(seed), f(seed + 1), ... until a draw is free of degeneracies.
template <typename F>
void on_generic_draw(std::uint64_t seed, F&& f) {
  for (int i = 0; i < 20; ++i) {
    try {
      f(seed + static_cast<std::uint64_t>(i));
      return;
    } catch (const DegeneracyError&) {
    }
  }
  FAIL() << "no generic draw from seed " << seed;
}

bool same_tuple(const StripTuple& a, const StripTuple& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal_with_shift(a[i], b[i], 0)) return false;
  return true;
}

}  // namespace

TEST(Parse, NamedMaps) {
  EXPECT_EQ(std::get<Generalized>(parse_map_spec("T_st", 2)), short_diagonal(2));
  EXPECT_EQ(std::get<Generalized>(parse_map_spec("T_sh", 3)), (Generalized{{2, 2}, {1, 1}}));
  EXPECT_EQ(std::get<Generalized>(parse_map_spec("T_m:1", 3)), (Generalized{{2, 1}, {1, 1}}));
  EXPECT_EQ(std::get<Generalized>(parse_map_spec("T_deep:2,4", 3)), (Generalized{{1, 4}, {1, 1}}));
  EXPECT_EQ(std::get<Generalized>(parse_map_spec("T:2,3/1,1", 3)), (Generalized{{2, 3}, {1, 1}}));
  EXPECT_EQ(std::get<Skew>(parse_map_spec("skew:0,2;1,4", 2)), (Skew{{{0, 2}, {1, 4}}}));
  EXPECT_EQ(std::get<Mixed>(parse_map_spec("mixed:0,3|1,2,4", 3)), (Mixed{{0, 3}, {1, 2, 4}}));
  EXPECT_THROW(parse_map_spec("T_st", 3), ParseError);
  EXPECT_THROW(parse_map_spec("T:2/1", 3), ParseError);
  EXPECT_THROW(parse_map_spec("T:0/1", 2), ParseError);
  EXPECT_THROW(parse_map_spec("skew:0,2;0,2", 2), ParseError);
  EXPECT_THROW(parse_map_spec("what", 2), ParseError);
  for (const char* text : {"T:2,3/1,1", "skew:0,2;1,4", "mixed:0,3|1,2,4", "universal:1,-2;-5,3/0,1;2,0"}) {
    const std::size_t d = std::string_view(text).starts_with("T:2,3") || text[0] == 'm' ? 3 : 2;
    EXPECT_EQ(parse_map_spec(format_map_spec(parse_map_spec(text, d)), d), parse_map_spec(text, d)) << text;
  }
}

TEST(DiagonalHyperplane, Examples) {
  const VertexStrip s = random_strip(3, 12, {1, 10}, 1);
  EXPECT_EQ(diagonal_hyperplane(s, Generalized{{2, 3}, {1, 1}}, 0).front(), through(s, {0, 2, 5}));
  EXPECT_EQ(diagonal_hyperplane(s, dented(3, 1), 4).front(), through(s, {4, 6, 7}));
  const VertexStrip s2 = random_strip(2, 8, {1, 10}, 2);
  EXPECT_EQ(diagonal_hyperplane(s2, short_diagonal(2), 1).front(), through(s2, {1, 3}));
  const auto bar = diagonal_hyperplane(s2, Skew{{{0, 2}, {1, 4}}}, 0);
  ASSERT_EQ(bar.size(), 2u);
  EXPECT_EQ(bar[1], through(s2, {1, 4}));
  EXPECT_THROW(diagonal_hyperplane(s2, short_diagonal(2), 7), WindowExceeded);
}

TEST(Reach, Examples) {
  EXPECT_EQ(reach(Generalized{{2, 3}, {1, 1}}, 3), 7);
  EXPECT_EQ(reach(short_diagonal(2), 2), 3);
  EXPECT_EQ(reach(Skew{{{0, 2}, {1, 4}}}, 2), 4);
  const VertexStrip s = random_strip(3, 8, {1, 10}, 4);
  const VertexStrip out = apply_strip(Generalized{{2, 3}, {1, 1}}, s);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_EQ(out.lo(), 0);
  EXPECT_THROW(apply_strip(Generalized{{2, 3}, {1, 1}}, random_strip(3, 7, {1, 10}, 4)), WindowExceeded);
}

TEST(Apply, StandardPentagramByHand) {
  const VertexStrip s = random_strip(2, 10, {1, 10}, 6);
  const VertexStrip out = apply_strip(short_diagonal(2), s);
  for (long k = out.lo(); k < out.hi(); ++k) {
    std::vector<Hyperplane> lines{through(s, {k, k + 2}), through(s, {k + 1, k + 3})};
    ASSERT_EQ(out.at(k), meet_hyperplanes(lines));
  }
}

TEST(Apply, CorrugatedIsShortDiagonalInThePlane) {
  for (std::uint64_t seed = 1; seed <= 100; seed += 10)
    on_generic_draw(seed, [](std::uint64_t s) {
      const TwistedPolygon p = random_twisted(2, 11, {1, 10}, s);
      const TwistedPolygon a = apply_polygon(Corrugated{}, p), b = apply_polygon(short_diagonal(2), p);
      const auto shift = equal_up_to_shift(a, b, 3);
      ASSERT_TRUE(shift.has_value());
      EXPECT_EQ(*shift, 1);  // T_st v_k = T_cor v_{k+1}
    });
}

TEST(Apply, StandardMapRaisesHeight) {
  for (std::uint64_t seed = 1; seed <= 50; seed += 10)
    on_generic_draw(seed, [](std::uint64_t s) {
      const TwistedPolygon p = random_twisted(2, 11, {1, 10}, s);
      EXPECT_GT(polygon_height(apply_polygon(short_diagonal(2), p)), polygon_height(p));
    });
}

TEST(Apply, MonodromyPreservedForEveryVariant) {
  const std::vector<std::pair<std::string, std::size_t>> specs = {
      {"T_st", 2},         {"skew:0,2;1,4", 2}, {"T_sh", 3},         {"T_m:2", 3},
      {"T_deep:1,3", 3},   {"T:2,3/1,1", 3},    {"mixed:0,3|1,2,4", 3}, {"universal:1,-2;-5,3/0,1;2,0", 2}};
  for (const auto& [text, d] : specs)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const TrialOutcome o = monodromy_trial(parse_map_spec(text, d), d, 11, seed * 100);
      ASSERT_TRUE(o.pass) << text << " " << o.detail;
    }
}

TEST(Apply, CorrugatedPolygonRejectsGenericInput) {
  const TwistedPolygon p = random_twisted(3, 11, {1, 10}, 1);
  EXPECT_THROW(apply_polygon(Corrugated{}, p), DegenerateImage);
}

TEST(Duality, InverseSpec) {
  EXPECT_EQ(inverse_spec(Generalized{{2, 3}, {1, 1}}), (Generalized{{1, 1}, {3, 2}}));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = 2 + t % 2;
    const Generalized g = random_generalized(d, rng);
    const TrialOutcome o = duality_trial(g, 500 + t);
    ASSERT_TRUE(o.pass) << format_map_spec(g);
  }
}

TEST(Duality, ShortMapIsShift) {
  std::optional<long> first;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const TrialOutcome o = shift_map_trial(Generalized{{1, 2}, {2, 1}}, seed);
    ASSERT_TRUE(o.pass);
    if (!first) first = o.shift;
    EXPECT_EQ(o.shift, first);
  }
}

TEST(Universal, ReducesToGeneralized) {
  for (const auto& g : {short_diagonal(2), short_diagonal(3), Generalized{{2, 3}, {1, 1}}}) {
    const std::size_t d = g.jumps.size() + 1;
    on_generic_draw(7, [&](std::uint64_t seed) {
      const VertexStrip s = random_strip(d, 30, {1, 10}, seed);
      const StripTuple image = apply_universal(as_universal(g), StripTuple(d, s));
      const VertexStrip direct = apply_strip(g, s);
      for (const auto& out : image) EXPECT_TRUE(equal_up_to_shift(direct, out, 10).has_value());
    });
  }
}

TEST(Universal, PaperTwoDimensionalExample) {
  const IntMatrix i{{1, -2}, {-5, 3}};
  const StripTuple y = random_strip_tuple(2, 20, {1, 10}, 3);
  const StripTuple lines = alpha_map(i, y);
  for (long k = 6; k < 14; ++k) {
    std::vector<ProjPoint> a{y[0].at(k + 1), y[1].at(k - 2)}, b{y[0].at(k - 5), y[1].at(k + 3)};
    EXPECT_EQ(lines[0].at(k), as_point(span_hyperplane(a)));
    EXPECT_EQ(lines[1].at(k), as_point(span_hyperplane(b)));
  }
}

TEST(Universal, AlphaIdentities) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 2;
    const IntMatrix a = random_distinct_rows(d, rng, {-3, 3});
    on_generic_draw(100 * t, [&](std::uint64_t seed) {
      const StripTuple y = random_strip_tuple(d, 40, {1, 10}, seed);
      ASSERT_TRUE(same_tuple(y, alpha_map(negated_transpose(a), alpha_map(a, y))));
    });
  }
  for (int t = 0; t < 10; ++t) {
    const IntMatrix j = random_skew_symmetric(3, rng);
    on_generic_draw(5000 + 100 * t, [&](std::uint64_t seed) {
      const StripTuple y = random_strip_tuple(3, 40, {1, 10}, seed);
      ASSERT_TRUE(same_tuple(y, alpha_map(j, alpha_map(j, y))));
    });
  }
  EXPECT_THROW(random_skew_symmetric(2, rng), UsageError);
}

TEST(Universal, Factorization) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Universal u = random_universal(2 + t % 2, rng);
    on_generic_draw(100 * t, [&](std::uint64_t seed) {
      const StripTuple y = random_strip_tuple(u.jumps.size(), 40, {1, 10}, seed);
      ASSERT_TRUE(same_tuple(apply_universal(u, y), alpha_map(u.intersections, alpha_map(u.jumps, y))));
    });
  }
}

TEST(Universal, InverseRoundTrip) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const Universal u = random_universal(2 + t % 2, rng);
    EXPECT_EQ(universal_inverse_spec(universal_inverse_spec(u)), u);
    const TrialOutcome o = universal_duality_trial(u, 1000 + 50 * t);
    ASSERT_TRUE(o.pass) << o.detail;
  }
}

TEST(Universal, LiteralNegatedTransposeOrderIsNotTheInverse) {
  // Keeping I before J, i.e. T_{-I^T,-J^T}, does not undo T_{I,J} in general.
  const Universal u{{{0, 1}, {2, -1}}, {{1, 0}, {-2, 3}}};
  const Universal literal{negated_transpose(u.jumps), negated_transpose(u.intersections)};
  on_generic_draw(5, [&](std::uint64_t seed) {
    const StripTuple y = random_strip_tuple(2, 44, {1, 10}, seed);
    const StripTuple image = apply_universal(u, y);
    EXPECT_TRUE(same_tuple(y, apply_universal(universal_inverse_spec(u), image)));
    bool undone = false;
    try {
      undone = same_tuple(y, apply_universal(literal, image));
    } catch (const DegeneracyError&) {
    }
    EXPECT_FALSE(undone);
  });
}

TEST(Universal, Conjugation) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const IntMatrix j = random_skew_symmetric(3, rng);
    const IntMatrix i = random_distinct_rows(3, rng, {-3, 3});
    const TrialOutcome o = conjugation_trial(i, j, 3000 + 50 * t);
    ASSERT_TRUE(o.pass) << o.detail;
  }
}

TEST(Universal, MonodromyMismatch) {
  const TwistedPolygon a = random_twisted(2, 11, {1, 10}, 1), b = random_twisted(2, 11, {1, 10}, 2);
  const std::vector<TwistedPolygon> polys{a, b};
  EXPECT_THROW(apply_universal(Universal{{{0, 1}, {1, 0}}, {{0, 1}, {1, 0}}}, std::span<const TwistedPolygon>(polys)),
               MonodromyMismatch);
}

TEST(Corrugated, RestrictionsAgreeUpToShift) {
  std::optional<long> s1, s2, s12;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CorrugatedOutcome o = corrugated_trial(3, seed * 10);
    ASSERT_TRUE(o.pass);
    if (!s1) s1 = o.shift_t1, s2 = o.shift_t2, s12 = o.shift_t1_t2;
    EXPECT_EQ(o.shift_t1, s1);
    EXPECT_EQ(o.shift_t2, s2);
    EXPECT_EQ(o.shift_t1_t2, s12);
  }
}

TEST(Mixed, MatchesSkewPresentation) {
  // (v_k, v_{k+3}) meet (v_{k+1}, v_{k+2}, v_{k+4}) as three planes.
  const MapSpec mixed = Mixed{{0, 3}, {1, 2, 4}};
  const MapSpec skew = Skew{{{0, 1, 3}, {0, 2, 3}, {1, 2, 4}}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) ASSERT_TRUE(same_map_trial(mixed, skew, 3, seed * 7).pass);
}
