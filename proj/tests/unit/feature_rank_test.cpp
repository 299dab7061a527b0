#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "chids/error.hpp"
#include "chids/feature_rank.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace chids {
namespace {

std::vector<std::size_t> oracle_bins(const Dataset& d, const Discretization& disc, std::size_t f) {
  std::vector<std::size_t> bins;
  for (const auto& r : d.records) bins.push_back(oracle::bin_of(disc.features[f], r.values[f]));
  return bins;
}

std::vector<AttackClass> classes_of(const Dataset& d) {
  std::vector<AttackClass> c;
  for (const auto& r : d.records) c.push_back(r.category);
  return c;
}

// Recursive Fayyad-Irani with every cut recounted from scratch.
void mdl_oracle(std::vector<std::pair<double, AttackClass>> rows, std::vector<double>& cuts) {
  const std::size_t n = rows.size();
  if (n < 2) return;
  auto classes = [](auto first, auto last) {
    std::vector<AttackClass> c;
    for (auto it = first; it != last; ++it) c.push_back(it->second);
    return c;
  };
  auto distinct = [](const std::vector<AttackClass>& c) { return double(std::set(c.begin(), c.end()).size()); };
  const auto all = classes(rows.begin(), rows.end());
  const double h = oracle::entropy(all);
  if (h == 0.0) return;
  double best = INFINITY;
  std::size_t pos = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (rows[i - 1].first == rows[i].first) continue;
    const auto l = classes(rows.begin(), rows.begin() + i);
    const auto r = classes(rows.begin() + i, rows.end());
    const double e = (double(i) * oracle::entropy(l) + double(n - i) * oracle::entropy(r)) / double(n);
    if (e < best - 1e-12) {
      best = e;
      pos = i;
    }
  }
  if (pos == 0) return;
  const auto l = classes(rows.begin(), rows.begin() + pos);
  const auto r = classes(rows.begin() + pos, rows.end());
  const double k = distinct(all), k1 = distinct(l), k2 = distinct(r);
  const double delta =
      std::log2(std::pow(3.0, k) - 2.0) - (k * h - k1 * oracle::entropy(l) - k2 * oracle::entropy(r));
  if (!(h - best > (std::log2(double(n - 1)) + delta) / double(n))) return;
  const double cut = (rows[pos - 1].first + rows[pos].first) / 2.0;
  mdl_oracle({rows.begin(), rows.begin() + pos}, cuts);
  cuts.push_back(cut);
  mdl_oracle({rows.begin() + pos, rows.end()}, cuts);
}

TEST(Mdl, SeparableColumnGetsOneCut) {
  const std::vector<double> v{1, 2, 3, 4, 10, 11, 12, 13};
  const std::vector<AttackClass> c(4, AttackClass::Normal);
  std::vector<AttackClass> cls = c;
  cls.insert(cls.end(), 4, AttackClass::DoS);
  const auto cuts = mdl_cut_points(v, cls);
  ASSERT_EQ(cuts.size(), 1u);
  EXPECT_DOUBLE_EQ(cuts[0], 7.0);
}

TEST(Mdl, PureOrTinyColumnsGetNone) {
  const std::vector<double> v{1, 2, 3, 4};
  const std::vector<AttackClass> pure(4, AttackClass::Probe);
  EXPECT_TRUE(mdl_cut_points(v, pure).empty());
  const std::vector<AttackClass> mixed{AttackClass::Normal, AttackClass::DoS, AttackClass::Normal,
                                       AttackClass::DoS};
  EXPECT_TRUE(mdl_cut_points(v, mixed).empty());
}

TEST(MdlProperty, MatchesRecountingOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 100);
  std::uniform_int_distribution<std::size_t> rows(2, 200);
  std::bernoulli_distribution noise(0.1);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = rows(rng);
    const double t1 = u(rng), t2 = u(rng);
    std::vector<double> v;
    std::vector<AttackClass> c;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = u(rng);
      std::size_t k = (x > t1) + (x > t2);
      if (noise(rng)) k = (k + 1) % 3;
      v.push_back(x);
      c.push_back(class_at(k));
    }
    std::vector<std::pair<double, AttackClass>> sorted;
    for (std::size_t i = 0; i < n; ++i) sorted.push_back({v[i], c[i]});
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> expected;
    mdl_oracle(sorted, expected);
    EXPECT_EQ(mdl_cut_points(v, c), expected) << "trial " << trial;
  }
}

TEST(ChiSquaredProperty, MatchesContingencyOracle) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> rows(2, 200), classes(2, 5);
  for (int trial = 0; trial < 150; ++trial) {
    const auto data = testing::random_dataset(
        rng, {.rows = rows(rng), .numeric = 3, .nominal = 2, .symbols = 4, .classes = classes(rng)});
    const auto disc = discretize(data);
    const auto cls = classes_of(data);
    for (std::size_t f = 0; f < data.schema.size(); ++f) {
      const double want = oracle::chi_squared(oracle_bins(data, disc, f), cls);
      const auto got = chi_squared_score(data, disc, f);
      EXPECT_NEAR(got.score, want, 1e-9 * std::max(1.0, want)) << "trial " << trial << " f" << f;
      EXPECT_EQ(got.feature, data.schema[f].name);
      EXPECT_EQ(got.method, RankMethod::ChiSquared);
    }
  }
}

TEST(InfoGainRatioProperty, MatchesEntropyOracle) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<std::size_t> rows(2, 200), classes(2, 5);
  for (int trial = 0; trial < 150; ++trial) {
    const auto data = testing::random_dataset(
        rng, {.rows = rows(rng), .numeric = 3, .nominal = 2, .symbols = 3, .classes = classes(rng)});
    const auto disc = discretize(data);
    const auto cls = classes_of(data);
    for (std::size_t f = 0; f < data.schema.size(); ++f) {
      const double want = oracle::info_gain_ratio(oracle_bins(data, disc, f), cls);
      const double got = info_gain_ratio_score(data, disc, f).score;
      EXPECT_NEAR(got, want, 1e-9) << "trial " << trial << " f" << f;
      EXPECT_GE(got, 0.0);
      EXPECT_LE(got, 1.0 + 1e-12);
    }
  }
}

TEST(InfoGainRatio, ConstantFeatureScoresZero) {
  std::mt19937_64 rng(15);
  auto data = testing::random_dataset(rng, {.rows = 50});
  for (auto& r : data.records) r.values[1] = 3.0;
  const auto disc = discretize(data);
  EXPECT_EQ(info_gain_ratio_score(data, disc, 1).score, 0.0);
  EXPECT_EQ(chi_squared_score(data, disc, 1).score, 0.0);
}

TEST(Rank, ParallelMatchesSerial) {
  const auto data = testing::synthetic_dataset({.normal = 400, .dos = 300, .probe = 60, .r2l = 20, .u2r = 8});
  const auto d1 = discretize(data, 1);
  const auto d8 = discretize(data, 8);
  for (std::size_t f = 0; f < data.schema.size(); ++f) EXPECT_EQ(d1.features[f].cuts, d8.features[f].cuts);
  for (auto m : {RankMethod::ChiSquared, RankMethod::InfoGainRatio}) {
    const auto a = rank_features(data, d1, m, 1);
    const auto b = rank_features(data, d8, m, 8);
    ASSERT_EQ(a.size(), 41u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].feature, b[i].feature);
      EXPECT_EQ(a[i].score, b[i].score);
    }
  }
}

TEST(Select, TopKWithIndexTieBreak) {
  std::vector<FeatureScore> s{{"a", 0, 0.5}, {"b", 1, 0.9}, {"c", 2, 0.5}, {"d", 3, 0.1}};
  EXPECT_EQ(select_top_k(s, 2), (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(select_top_k(s, 3), (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_TRUE(select_top_k(s, 0).empty());
  try {
    select_top_k(s, 5);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
  std::vector<FeatureScore> shuffled{s[3], s[2], s[1], s[0]};
  EXPECT_EQ(select_top_k(shuffled, 3), select_top_k(s, 3));
}

TEST(Select, SyntheticSignalOutranksNoise) {
  const auto data = testing::synthetic_dataset({.normal = 800, .dos = 500, .probe = 100, .r2l = 40, .u2r = 12});
  const auto disc = discretize(data);
  const auto chi = rank_features(data, disc, RankMethod::ChiSquared);
  const auto top = select_top_k(chi, 6);
  EXPECT_NE(std::find(top.begin(), top.end(), "service"), top.end());
  for (const char* dead : {"num_outbound_cmds", "urgent", "su_attempted"})
    EXPECT_EQ(std::find(top.begin(), top.end(), dead), top.end());
}

TEST(RankReport, RoundTripsInRankOrder) {
  std::vector<FeatureScore> s{{"x", 0, 0.25, RankMethod::InfoGainRatio},
                              {"y", 1, 0.75, RankMethod::InfoGainRatio}};
  std::stringstream buf;
  write_rank_report(buf, s);
  EXPECT_EQ(buf.str(),
            "rank\tfeature\tmethod\tscore\n1\ty\tInfoGainRatio\t0.7500000000\n2\tx\tInfoGainRatio\t0.2500000000\n");
  const auto back = read_rank_report(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].feature, "y");
  EXPECT_EQ(back[1].score, 0.25);
  std::istringstream junk("nope\n");
  EXPECT_THROW(read_rank_report(junk), Error);
}

}  // namespace
}  // namespace chids
