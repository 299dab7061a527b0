#include "chids/feature_rank.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "chids/error.hpp"
#include "chids/parallel.hpp"

namespace chids {

namespace {

double entropy(const ClassCounts& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::size_t classes_present(const ClassCounts& counts) {
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

struct Labeled {
  double value;
  AttackClass cls;
};

void mdl_split(std::span<const Labeled> rows, std::vector<double>& cuts) {
  const std::size_t n = rows.size();
  if (n < 2) return;

  ClassCounts total{};
  for (const auto& r : rows) ++total[index_of(r.cls)];
  const double h_all = entropy(total, n);
  if (h_all == 0.0) return;

  ClassCounts left{};
  double best_e = INFINITY;
  std::size_t best_pos = 0;
  ClassCounts best_left{};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    ++left[index_of(rows[i].cls)];
    if (rows[i].value == rows[i + 1].value) continue;
    ClassCounts right{};
    for (std::size_t c = 0; c < kNumClasses; ++c) right[c] = total[c] - left[c];
    const std::size_t nl = i + 1;
    const std::size_t nr = n - nl;
    const double e = (static_cast<double>(nl) * entropy(left, nl) +
                      static_cast<double>(nr) * entropy(right, nr)) /
                     static_cast<double>(n);
    if (e < best_e) {
      best_e = e;
      best_pos = nl;
      best_left = left;
    }
  }
  if (best_pos == 0) return;

  ClassCounts best_right{};
  for (std::size_t c = 0; c < kNumClasses; ++c) best_right[c] = total[c] - best_left[c];
  const double h_left = entropy(best_left, best_pos);
  const double h_right = entropy(best_right, n - best_pos);
  const double k = static_cast<double>(classes_present(total));
  const double k1 = static_cast<double>(classes_present(best_left));
  const double k2 = static_cast<double>(classes_present(best_right));
  const double gain = h_all - best_e;
  const double delta = std::log2(std::pow(3.0, k) - 2.0) - (k * h_all - k1 * h_left - k2 * h_right);
  const double threshold = (std::log2(static_cast<double>(n - 1)) + delta) / static_cast<double>(n);
  if (!(gain > threshold)) return;

  mdl_split(rows.first(best_pos), cuts);
  cuts.push_back((rows[best_pos - 1].value + rows[best_pos].value) / 2.0);
  mdl_split(rows.subspan(best_pos), cuts);
}

// bins x classes, row-major.
std::vector<ClassCounts> contingency(const Dataset& train, const FeatureBins& bins,
                                     std::size_t feature) {
  std::vector<ClassCounts> table(bins.bin_count(), ClassCounts{});
  for (const auto& r : train.records) ++table[bins.bin_of(r.values[feature])][index_of(r.category)];
  return table;
}

const FeatureBins& bins_for(const Discretization& disc, std::size_t feature) {
  if (feature >= disc.features.size())
    throw Error(ErrorCode::SchemaMismatch, "discretization does not cover feature " +
                                               std::to_string(feature));
  return disc.features[feature];
}

}  // namespace

std::size_t FeatureBins::bin_of(double v) const noexcept {
  if (kind == FeatureKind::Nominal) {
    if (v < 0 || v >= static_cast<double>(nominal_bins)) return nominal_bins;
    return static_cast<std::size_t>(v);
  }
  return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

std::vector<double> mdl_cut_points(std::span<const double> values,
                                   std::span<const AttackClass> classes) {
  std::vector<Labeled> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) rows[i] = {values[i], classes[i]};
  std::stable_sort(rows.begin(), rows.end(), [](const Labeled& a, const Labeled& b) {
    return a.value < b.value || (a.value == b.value && a.cls < b.cls);
  });
  std::vector<double> cuts;
  mdl_split(rows, cuts);
  return cuts;
}

Discretization discretize(const Dataset& train, unsigned threads) {
  Discretization disc;
  disc.features.resize(train.schema.size());
  std::vector<AttackClass> classes(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) classes[i] = train.records[i].category;

  parallel_for(train.schema.size(), threads, [&](std::size_t f) {
    auto& bins = disc.features[f];
    bins.kind = train.schema[f].kind;
    if (bins.kind == FeatureKind::Nominal) {
      bins.nominal_bins = train.schema[f].domain.size();
      return;
    }
    std::vector<double> column(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) column[i] = train.records[i].values[f];
    bins.cuts = mdl_cut_points(column, classes);
  });
  return disc;
}

std::string_view to_string(RankMethod m) noexcept {
  return m == RankMethod::ChiSquared ? "ChiSquared" : "InfoGainRatio";
}

FeatureScore chi_squared_score(const Dataset& train, const Discretization& disc,
                               std::size_t feature) {
  const auto table = contingency(train, bins_for(disc, feature), feature);
  ClassCounts col{};
  std::vector<std::size_t> row(table.size(), 0);
  for (std::size_t b = 0; b < table.size(); ++b)
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      row[b] += table[b][c];
      col[c] += table[b][c];
    }
  const double n = static_cast<double>(train.size());
  double chi2 = 0.0;
  for (std::size_t b = 0; b < table.size(); ++b) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double expected = static_cast<double>(row[b]) * static_cast<double>(col[c]) / n;
      if (expected <= 0.0) continue;
      const double d = static_cast<double>(table[b][c]) - expected;
      chi2 += d * d / expected;
    }
  }
  return {train.schema[feature].name, feature, chi2, RankMethod::ChiSquared};
}

FeatureScore info_gain_ratio_score(const Dataset& train, const Discretization& disc,
                                   std::size_t feature) {
  const auto table = contingency(train, bins_for(disc, feature), feature);
  const std::size_t n = train.size();
  ClassCounts col{};
  double conditional = 0.0;
  double split_info = 0.0;
  for (const auto& cell : table) {
    const std::size_t nb = std::accumulate(cell.begin(), cell.end(), std::size_t{0});
    if (nb == 0) continue;
    for (std::size_t c = 0; c < kNumClasses; ++c) col[c] += cell[c];
    const double p = static_cast<double>(nb) / static_cast<double>(n);
    conditional += p * entropy(cell, nb);
    split_info -= p * std::log2(p);
  }
  double igr = 0.0;
  if (split_info > 0.0) igr = std::max(0.0, entropy(col, n) - conditional) / split_info;
  return {train.schema[feature].name, feature, igr, RankMethod::InfoGainRatio};
}

std::vector<FeatureScore> rank_features(const Dataset& train, const Discretization& disc,
                                        RankMethod method, unsigned threads) {
  std::vector<FeatureScore> scores(train.schema.size());
  parallel_for(scores.size(), threads, [&](std::size_t f) {
    scores[f] = method == RankMethod::ChiSquared ? chi_squared_score(train, disc, f)
                                                 : info_gain_ratio_score(train, disc, f);
  });
  return scores;
}

std::vector<FeatureScore> sort_by_rank(std::span<const FeatureScore> scores) {
  std::vector<FeatureScore> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  return sorted;
}

std::vector<std::string> select_top_k(std::span<const FeatureScore> scores, std::size_t k) {
  if (k > scores.size())
    throw Error(ErrorCode::InvalidConfig, "cannot select " + std::to_string(k) + " of " +
                                              std::to_string(scores.size()) + " features");
  const auto sorted = sort_by_rank(scores);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(sorted[i].feature);
  return names;
}

void write_rank_report(std::ostream& out, std::span<const FeatureScore> scores) {
  out << "rank\tfeature\tmethod\tscore\n";
  const auto sorted = sort_by_rank(scores);
  char buf[64];
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10f", sorted[i].score);
    out << (i + 1) << '\t' << sorted[i].feature << '\t' << to_string(sorted[i].method) << '\t'
        << buf << '\n';
  }
}

std::vector<FeatureScore> read_rank_report(std::istream& in) {
  std::vector<FeatureScore> scores;
  std::string line;
  if (!std::getline(in, line) || line != "rank\tfeature\tmethod\tscore")
    throw Error(ErrorCode::FormatError, "rank report: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string rank, name, method, score;
    if (!std::getline(row, rank, '\t') || !std::getline(row, name, '\t') ||
        !std::getline(row, method, '\t') || !std::getline(row, score, '\t'))
      throw Error(ErrorCode::FormatError, "rank report: short row '" + line + "'");
    FeatureScore fs;
    fs.feature = name;
    fs.index = scores.size();
    if (method == "ChiSquared") {
      fs.method = RankMethod::ChiSquared;
    } else if (method == "InfoGainRatio") {
      fs.method = RankMethod::InfoGainRatio;
    } else {
      throw Error(ErrorCode::FormatError, "rank report: unknown method '" + method + "'");
    }
    try {
      fs.score = std::stod(score);
    } catch (const std::exception&) {
      throw Error(ErrorCode::FormatError, "rank report: bad score '" + score + "'");
    }
    scores.push_back(std::move(fs));
  }
  return scores;
}

}  // namespace chids
