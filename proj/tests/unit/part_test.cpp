#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "chids/error.hpp"
#include "chids/part.hpp"
#include "fixtures.hpp"

namespace chids {
namespace {

bool naive_test(const RuleTest& t, double v) {
  switch (t.op) {
    case TestOp::Equals: return v == t.value;
    case TestOp::LessEq: return v <= t.value;
    case TestOp::Greater: return v > t.value;
  }
  return false;
}

bool naive_match(const Rule& rule, const std::vector<double>& v) {
  for (const auto& t : rule.tests)
    if (!naive_test(t, v[t.feature])) return false;
  return true;
}

AttackClass naive_decide(const RuleSet& rs, const std::vector<double>& v) {
  for (const auto& r : rs.rules())
    if (naive_match(r, v)) return r.consequent;
  return rs.default_class();
}

TEST(PartProperty, CoverageAndErrorsReplaySeparateAndConquer) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> rows(1, 200);
  for (int trial = 0; trial < 120; ++trial) {
    const auto data = testing::random_dataset(rng, {.rows = rows(rng), .numeric = 2, .nominal = 1});
    const auto rs = train_part(data, {.min_leaf = 2, .prune = trial % 3 != 0});
    std::vector<std::size_t> residual(data.size());
    std::iota(residual.begin(), residual.end(), 0);
    for (const auto& rule : rs.rules()) {
      std::size_t covered = 0, wrong = 0;
      std::vector<std::size_t> rest;
      for (auto r : residual) {
        if (naive_match(rule, data.records[r].values)) {
          ++covered;
          wrong += data.records[r].category != rule.consequent;
        } else {
          rest.push_back(r);
        }
      }
      EXPECT_EQ(rule.coverage, covered) << "trial " << trial << ": " << rs.describe(rule);
      EXPECT_EQ(rule.errors, wrong);
      EXPECT_GT(covered, 0u);
      residual = std::move(rest);
    }
    EXPECT_TRUE(residual.empty()) << "trial " << trial;
  }
}

TEST(PartProperty, PredictIsFirstMatch) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2, 5);
  std::uniform_int_distribution<int> sym(-1, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = testing::random_dataset(rng, {.rows = 120, .numeric = 3, .nominal = 1});
    const auto rs = train_part(data);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> v{u(rng), u(rng), u(rng), double(sym(rng))};
      EXPECT_EQ(rs.predict(v), naive_decide(rs, v));
    }
    for (const auto& r : data.records) EXPECT_EQ(rs.predict(r), naive_decide(rs, r.values));
  }
}

TEST(Part, ConsistentDataHasNoTrainingErrors) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0, 10);
  Dataset data{FeatureSchema({{0, "x", FeatureKind::Numeric, {}}, {1, "y", FeatureKind::Numeric, {}}}), {}};
  for (int i = 0; i < 400; ++i) {
    KddRecord r;
    r.values = {u(rng), u(rng)};
    r.category = r.values[0] < 4 ? AttackClass::Normal : (r.values[1] < 5 ? AttackClass::DoS : AttackClass::R2L);
    data.records.push_back(r);
  }
  const auto rs = train_part(data, {.min_leaf = 1, .prune = false});
  for (const auto& rule : rs.rules()) EXPECT_EQ(rule.errors, 0u) << rs.describe(rule);
  for (const auto& r : data.records) EXPECT_EQ(rs.predict(r), r.category);
}

TEST(Part, SingleThresholdGivesOneTestThenCatchAll) {
  Dataset data{FeatureSchema({{0, "x", FeatureKind::Numeric, {}}}), {}};
  for (int i = 0; i < 20; ++i) data.records.push_back({{double(i)}, "normal", AttackClass::Normal});
  for (int i = 20; i < 30; ++i) data.records.push_back({{double(i)}, "smurf", AttackClass::DoS});
  const auto rs = train_part(data);
  ASSERT_EQ(rs.rules().size(), 2u);
  const auto& first = rs.rules()[0];
  ASSERT_EQ(first.tests.size(), 1u);
  EXPECT_EQ(first.tests[0].op, TestOp::LessEq);
  EXPECT_DOUBLE_EQ(first.tests[0].value, 19.5);
  EXPECT_EQ(first.consequent, AttackClass::Normal);
  EXPECT_EQ(first.coverage, 20u);
  EXPECT_TRUE(rs.rules()[1].tests.empty());
  EXPECT_EQ(rs.rules()[1].consequent, AttackClass::DoS);
  EXPECT_EQ(rs.default_class(), AttackClass::Normal);
  EXPECT_EQ(rs.describe(first), "IF x <= 19.5 THEN Normal (cov=20, err=0)");
  EXPECT_EQ(rs.describe(rs.rules()[1]), "IF TRUE THEN DoS (cov=10, err=0)");
}

TEST(Part, RuleComesFromLargestPartialLeaf) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const auto data = testing::random_dataset(rng, {.rows = 100, .numeric = 2, .nominal = 1});
    const auto table = LearningTable::from(data);
    std::vector<std::size_t> rows(table.rows());
    std::iota(rows.begin(), rows.end(), 0);
    const auto prior = count_classes(table, rows);
    const auto leaves = grow_partial_tree(table, rows, {}, prior);
    ASSERT_FALSE(leaves.empty());
    std::size_t best = 0;
    for (const auto& l : leaves) best = std::max(best, l.coverage());
    const auto rule = build_partial_tree_rule(table, rows, {}, prior);
    EXPECT_EQ(rule.coverage, best);
  }
}

TEST(Part, SimplifyKeepsTightestBounds) {
  const std::vector<RuleTest> tests{{0, TestOp::LessEq, 5.0}, {1, TestOp::Equals, 2.0},
                                    {0, TestOp::Greater, 1.0}, {0, TestOp::LessEq, 3.0},
                                    {0, TestOp::Greater, 2.0}};
  const auto s = simplify_tests(tests);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], (RuleTest{0, TestOp::LessEq, 3.0}));
  EXPECT_EQ(s[1], (RuleTest{1, TestOp::Equals, 2.0}));
  EXPECT_EQ(s[2], (RuleTest{0, TestOp::Greater, 2.0}));
}

TEST(Part, SerializationRoundTrip) {
  const auto data = testing::synthetic_dataset({.normal = 600, .dos = 400, .probe = 60, .r2l = 25, .u2r = 10});
  const auto rs = train_part(data);
  std::stringstream buf;
  rs.write(buf);
  const auto back = RuleSet::read(buf);
  EXPECT_TRUE(back == rs);
  std::stringstream again;
  back.write(again);
  std::stringstream first;
  rs.write(first);
  EXPECT_EQ(first.str(), again.str());
  std::istringstream junk("# something else\n");
  EXPECT_THROW(RuleSet::read(junk), Error);
}

TEST(Part, SyntheticCorpusAccuracy) {
  const auto train = testing::synthetic_dataset({.normal = 1500, .dos = 900, .probe = 150, .r2l = 60, .u2r = 20, .seed = 4});
  const auto test = testing::synthetic_dataset({.normal = 500, .dos = 300, .probe = 50, .r2l = 20, .u2r = 8, .seed = 5});
  const auto rs = train_part(train);
  std::size_t right = 0;
  for (const auto& r : test.records) right += rs.predict(r) == r.category;
  EXPECT_GT(double(right) / double(test.size()), 0.9);
  EXPECT_THROW(rs.predict(std::vector<double>{1.0}), Error);
}

TEST(Part, DominantSymbolGivesSingleTestRule) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(0, 1);
  Dataset data{FeatureSchema({{0, "x", FeatureKind::Numeric, {}}, {1, "s", FeatureKind::Nominal, {"a", "b"}}}), {}};
  // 27 of the 30 DoS records carry s = a, and nothing else does.
  for (int i = 0; i < 27; ++i) data.records.push_back({{u(rng), 0.0}, "smurf", AttackClass::DoS});
  for (int i = 0; i < 3; ++i) data.records.push_back({{u(rng), 1.0}, "smurf", AttackClass::DoS});
  for (int i = 0; i < 12; ++i) data.records.push_back({{u(rng), 1.0}, "normal", AttackClass::Normal});

  // Widest error-free single test, by enumeration.
  std::vector<RuleTest> tests{{1, TestOp::Equals, 0.0}, {1, TestOp::Equals, 1.0}};
  for (const auto& r : data.records) {
    tests.push_back({0, TestOp::LessEq, r.values[0]});
    tests.push_back({0, TestOp::Greater, r.values[0]});
  }
  std::size_t widest = 0;
  RuleTest best;
  for (const auto& t : tests) {
    std::size_t cover = 0;
    std::set<AttackClass> seen;
    for (const auto& r : data.records)
      if (naive_test(t, r.values[t.feature])) {
        ++cover;
        seen.insert(r.category);
      }
    if (seen.size() == 1 && cover > widest) {
      widest = cover;
      best = t;
    }
  }
  ASSERT_EQ(best, (RuleTest{1, TestOp::Equals, 0.0}));

  const auto rule = build_partial_tree_rule(data);
  ASSERT_EQ(rule.tests.size(), 1u);
  EXPECT_EQ(rule.tests[0], best);
  EXPECT_EQ(rule.consequent, AttackClass::DoS);
  EXPECT_EQ(rule.coverage, widest);
}

TEST(Part, SeparableTwoClassToyNeedsAtMostTwoRules) {
  Dataset data{FeatureSchema({{0, "x", FeatureKind::Numeric, {}}, {1, "y", FeatureKind::Numeric, {}}}), {}};
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 3; ++j)
      data.records.push_back({{double(i), double(j)}, i + j < 6 ? "normal" : "smurf",
                              i < 5 ? AttackClass::Normal : AttackClass::DoS});
  const auto rs = train_part(data);
  EXPECT_LE(rs.rules().size(), 2u);
  for (const auto& rule : rs.rules()) EXPECT_EQ(rule.errors, 0u);
  for (const auto& r : data.records) EXPECT_EQ(rs.predict(r), r.category);
}

TEST(Part, SingleClassGivesOneAlwaysTrueRule) {
  Dataset data{FeatureSchema({{0, "x", FeatureKind::Numeric, {}}}), {}};
  for (int i = 0; i < 9; ++i) data.records.push_back({{double(i)}, "back", AttackClass::DoS});
  const auto rs = train_part(data);
  ASSERT_EQ(rs.rules().size(), 1u);
  EXPECT_TRUE(rs.rules()[0].tests.empty());
  EXPECT_EQ(rs.rules()[0].consequent, AttackClass::DoS);
  EXPECT_EQ(rs.rules()[0].coverage, 9u);
  EXPECT_EQ(rs.default_class(), AttackClass::DoS);
}

TEST(Part, TrainingIsDeterministic) {
  const auto data = testing::synthetic_dataset({.normal = 400, .dos = 300, .probe = 40, .r2l = 20, .u2r = 6});
  std::ostringstream a, b;
  train_part(data).write(a);
  train_part(data).write(b);
  EXPECT_EQ(a.str(), b.str());
}

}  // namespace
}  // namespace chids
