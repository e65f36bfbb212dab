#include <gtest/gtest.h>

#include <cmath>

#include "pentalab/height_lab.hpp"

using namespace pentalab;

namespace {

HeightTrace synthetic(double (*f)(int), int last) {
  HeightTrace t;
  for (int i = 0; i <= last; ++i) t.records.push_back({i, f(i), 0, 0});
  return t;
}

ExperimentConfig config(const std::string& spec, std::size_t d, int iterations, std::uint64_t seed) {
  ExperimentConfig c;
  c.d = d;
  c.spec = parse_map_spec(spec, d);
  c.iterations = iterations;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Classify, SyntheticPolynomial) {
  const Classification c = classify(synthetic([](int t) { return double(t) * t; }, 10));
  EXPECT_EQ(c.label, GrowthLabel::PolynomialLogHeight);
  EXPECT_NEAR(c.alpha, 2.0, 1e-9);
  EXPECT_NEAR(c.r2_poly, 1.0, 1e-12);
}

TEST(Classify, SyntheticExponential) {
  const Classification c = classify(synthetic([](int t) { return std::pow(2.0, t); }, 10));
  EXPECT_EQ(c.label, GrowthLabel::SuperExponential);
  EXPECT_NEAR(c.sigma, std::log(2.0), 1e-9);
  EXPECT_NEAR(c.r2_exp, 1.0, 1e-12);
}

TEST(Classify, NoisyIsInconclusive) {
  const Classification c = classify(synthetic([](int t) { return t % 2 ? 100.0 : 2.0; }, 10));
  EXPECT_EQ(c.label, GrowthLabel::Inconclusive);
}

TEST(Classify, InsufficientData) {
  EXPECT_THROW(classify(synthetic([](int t) { return double(t); }, 3)), InsufficientData);
  EXPECT_THROW(classify(synthetic([](int) { return 0.0; }, 10)), InsufficientData);
}

TEST(Classify, LabelNames) {
  for (auto l : {GrowthLabel::PolynomialLogHeight, GrowthLabel::SuperExponential, GrowthLabel::Inconclusive})
    EXPECT_EQ(parse_growth_label(to_string(l)), l);
  EXPECT_THROW(parse_growth_label("integrable"), ParseError);
}

TEST(Trace, StandardMap) {
  const HeightTrace a = run_trace(config("T_st", 2, 10, 1));
  ASSERT_EQ(a.records.size(), 11u);
  EXPECT_FALSE(a.truncated);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].t, static_cast<int>(i));
    EXPECT_GE(a.records[i].log10_height, 0);
    if (i > 0) {
      EXPECT_GT(a.records[i].log10_height, a.records[i - 1].log10_height);
    }
  }
  EXPECT_EQ(a.records[0].digits, digit_count(polygon_height(random_twisted(2, 11, {1, 10}, a.seed_used))));
  EXPECT_LT(a.records[0].log10_height, 10);
  EXPECT_EQ(classify(a).label, GrowthLabel::PolynomialLogHeight);

  const HeightTrace b = run_trace(config("T_st", 2, 10, 1));
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].log10_height, b.records[i].log10_height);
    EXPECT_EQ(a.records[i].digits, b.records[i].digits);
  }
}

TEST(Trace, BudgetTruncates) {
  ExperimentConfig c = config("skew:0,2;1,4", 2, 10, 1);
  c.digit_budget = 20000;
  const HeightTrace t = run_trace(c);
  EXPECT_TRUE(t.truncated);
  EXPECT_LT(t.records.back().t, 10);
  EXPECT_LE(t.records.back().digits, 20000u * 40);
  EXPECT_EQ(classify(t).label, GrowthLabel::SuperExponential);
}

TEST(Trace, Preconditions) {
  EXPECT_THROW(run_trace(config("T_st", 2, 2, 1)), UsageError);
  ExperimentConfig c = config("T_st", 2, 5, 1);
  c.n = 4;
  EXPECT_THROW(run_trace(c), UsageError);
  EXPECT_THROW(run_trace(config("mixed:0,1|0,1,2", 3, 4, 1)), AllSeedsDegenerate);
}

TEST(Rows, Selection) {
  EXPECT_EQ(table_rows().size(), 21u);
  EXPECT_EQ(select_rows("").size(), 21u);
  EXPECT_EQ(select_rows("2d:1-4").size(), 4u);
  EXPECT_EQ(select_rows("3d:12").front().spec, "mixed:0,3|1,2,4");
  EXPECT_EQ(select_rows("2d").size(), 8u);
  EXPECT_EQ(select_rows("2d:5-8,3d:12-13").size(), 6u);
  EXPECT_THROW(select_rows("4d:1"), ParseError);
  EXPECT_THROW(select_rows("2d:30"), ParseError);
  int poly = 0;
  for (const auto& r : table_rows()) poly += r.expected == GrowthLabel::PolynomialLogHeight;
  EXPECT_EQ(poly, 10);
}

TEST(Rows, MedianAndMajority) {
  EXPECT_EQ(median({3, 1, 2}), 2);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  std::vector<SeedResult> seeds(3);
  seeds[0].classification = Classification{GrowthLabel::SuperExponential};
  seeds[1].classification = Classification{GrowthLabel::SuperExponential};
  EXPECT_EQ(majority(seeds), GrowthLabel::SuperExponential);
  seeds[1].classification = Classification{GrowthLabel::PolynomialLogHeight};
  EXPECT_EQ(majority(seeds), GrowthLabel::Inconclusive);
}

TEST(Tables, SubsetIsDeterministicAcrossJobs) {
  TableOptions opt;
  opt.rows = "2d:1-2";
  opt.seeds = {1, 2};
  int callbacks = 0;
  const TableReport one = reproduce_tables(opt, [&](const RowReport&) { ++callbacks; });
  EXPECT_EQ(callbacks, 2);
  opt.jobs = 3;
  const TableReport many = reproduce_tables(opt);
  EXPECT_TRUE(one.all_matched());
  ASSERT_EQ(one.rows.size(), many.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].observed, many.rows[i].observed);
    EXPECT_EQ(one.rows[i].median_final_log10_height, many.rows[i].median_final_log10_height);
  }
}
