#include "chids/learning_table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "chids/error.hpp"

namespace chids {

namespace {

constexpr double kMinGain = 1e-12;

double split_information(std::span<const std::size_t> sizes, std::size_t total) {
  double h = 0.0;
  for (std::size_t s : sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

bool single_class(const ClassCounts& counts, std::size_t& cls) {
  std::size_t seen = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (counts[c] == 0) continue;
    ++seen;
    cls = c;
  }
  return seen == 1;
}

std::optional<SplitChoice> numeric_split(const LearningTable& table,
                                         std::span<const std::size_t> rows, std::size_t feature,
                                         const TreeParams& params, const ClassCounts& total) {
  const auto& col = table.columns[feature];
  std::vector<std::size_t> order(rows.begin(), rows.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return col[a] < col[b] || (col[a] == col[b] && a < b);
  });

  // Collapse to runs of equal values.
  struct Run {
    double value;
    ClassCounts counts;
    std::size_t size;
  };
  std::vector<Run> runs;
  for (std::size_t r : order) {
    if (runs.empty() || runs.back().value != col[r]) runs.push_back({col[r], {}, 0});
    ++runs.back().counts[index_of(table.labels[r])];
    ++runs.back().size;
  }
  if (runs.size() < 2) return std::nullopt;

  const std::size_t n = rows.size();
  const double parent = class_entropy(total);
  ClassCounts left{};
  std::size_t nl = 0;
  std::optional<SplitChoice> best;
  for (std::size_t g = 0; g + 1 < runs.size(); ++g) {
    for (std::size_t c = 0; c < kNumClasses; ++c) left[c] += runs[g].counts[c];
    nl += runs[g].size;
    std::size_t ca = 0, cb = 0;
    if (single_class(runs[g].counts, ca) && single_class(runs[g + 1].counts, cb) && ca == cb)
      continue;  // not a class boundary
    const std::size_t nr = n - nl;
    if (nl < params.min_leaf || nr < params.min_leaf) continue;
    ClassCounts right{};
    for (std::size_t c = 0; c < kNumClasses; ++c) right[c] = total[c] - left[c];
    const double gain = parent - (static_cast<double>(nl) * class_entropy(left) +
                                  static_cast<double>(nr) * class_entropy(right)) /
                                     static_cast<double>(n);
    if (gain <= kMinGain) continue;
    if (best && gain <= best->gain) continue;
    double threshold = (runs[g].value + runs[g + 1].value) / 2.0;
    if (!(threshold < runs[g + 1].value)) threshold = runs[g].value;
    const std::size_t sizes[2] = {nl, nr};
    SplitChoice s;
    s.feature = feature;
    s.kind = FeatureKind::Numeric;
    s.threshold = threshold;
    s.branches = 2;
    s.gain = gain;
    s.gain_ratio = gain / split_information(sizes, n);
    best = s;
  }
  return best;
}

std::optional<SplitChoice> nominal_split(const LearningTable& table,
                                         std::span<const std::size_t> rows, std::size_t feature,
                                         const TreeParams& params, const ClassCounts& total) {
  const std::size_t k = table.domain_sizes[feature];
  if (k < 2) return std::nullopt;
  SplitChoice probe;
  probe.kind = FeatureKind::Nominal;
  probe.branches = k;
  std::vector<ClassCounts> bags(k, ClassCounts{});
  std::vector<std::size_t> sizes(k, 0);
  const auto& col = table.columns[feature];
  for (std::size_t r : rows) {
    const std::size_t b = branch_of(probe, col[r], 0);
    ++bags[b][index_of(table.labels[r])];
    ++sizes[b];
  }
  const std::size_t big_enough = static_cast<std::size_t>(std::count_if(
      sizes.begin(), sizes.end(), [&](std::size_t s) { return s >= params.min_leaf; }));
  if (big_enough < 2) return std::nullopt;

  const std::size_t n = rows.size();
  double conditional = 0.0;
  for (std::size_t b = 0; b < k; ++b)
    conditional += static_cast<double>(sizes[b]) * class_entropy(bags[b]);
  const double gain = class_entropy(total) - conditional / static_cast<double>(n);
  if (gain <= kMinGain) return std::nullopt;
  SplitChoice s = probe;
  s.feature = feature;
  s.gain = gain;
  s.gain_ratio = gain / split_information(sizes, n);
  return s;
}

}  // namespace

LearningTable LearningTable::from(const Dataset& data) {
  LearningTable t;
  const std::size_t f = data.schema.size();
  t.names.reserve(f);
  for (const auto& def : data.schema.features()) {
    t.names.push_back(def.name);
    t.kinds.push_back(def.kind);
    t.domain_sizes.push_back(def.kind == FeatureKind::Nominal ? def.domain.size() : 0);
  }
  t.columns.assign(f, std::vector<double>(data.size()));
  t.labels.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& r = data.records[i];
    if (r.values.size() != f) throw Error(ErrorCode::SchemaMismatch, "ragged record");
    for (std::size_t j = 0; j < f; ++j) t.columns[j][i] = r.values[j];
    t.labels[i] = r.category;
  }
  return t;
}

double class_entropy(const ClassCounts& counts) noexcept {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

ClassCounts count_classes(const LearningTable& table, std::span<const std::size_t> rows) {
  ClassCounts counts{};
  for (std::size_t r : rows) ++counts[index_of(table.labels[r])];
  return counts;
}

std::optional<SplitChoice> best_split_for_feature(const LearningTable& table,
                                                  std::span<const std::size_t> rows,
                                                  std::size_t feature, const TreeParams& params) {
  const ClassCounts total = count_classes(table, rows);
  return table.kinds[feature] == FeatureKind::Numeric
             ? numeric_split(table, rows, feature, params, total)
             : nominal_split(table, rows, feature, params, total);
}

std::optional<SplitChoice> choose_split(const LearningTable& table,
                                        std::span<const std::size_t> rows,
                                        const TreeParams& params) {
  const ClassCounts total = count_classes(table, rows);
  std::size_t only = 0;
  if (rows.size() < 2 * params.min_leaf || single_class(total, only)) return std::nullopt;

  std::vector<SplitChoice> candidates;
  for (std::size_t f = 0; f < table.features(); ++f) {
    auto s = table.kinds[f] == FeatureKind::Numeric
                 ? numeric_split(table, rows, f, params, total)
                 : nominal_split(table, rows, f, params, total);
    if (s) candidates.push_back(*s);
  }
  if (candidates.empty()) return std::nullopt;

  double mean_gain = 0.0;
  for (const auto& c : candidates) mean_gain += c.gain;
  mean_gain /= static_cast<double>(candidates.size());
  const double floor = mean_gain - 1e-9 * std::max(1.0, std::abs(mean_gain));

  const SplitChoice* best = nullptr;
  for (const auto& c : candidates) {
    if (c.gain < floor) continue;
    if (best == nullptr || c.gain_ratio > best->gain_ratio) best = &c;
  }
  return best ? std::optional<SplitChoice>(*best) : std::nullopt;
}

std::size_t branch_of(const SplitChoice& split, double v, std::size_t fallback) noexcept {
  if (split.kind == FeatureKind::Numeric) return v <= split.threshold ? 0 : 1;
  if (v < 0 || v >= static_cast<double>(split.branches)) return fallback;
  return static_cast<std::size_t>(v);
}

std::vector<std::vector<std::size_t>> partition_rows(const LearningTable& table,
                                                     std::span<const std::size_t> rows,
                                                     const SplitChoice& split) {
  std::vector<std::vector<std::size_t>> parts(split.branches);
  const auto& col = table.columns[split.feature];
  for (std::size_t r : rows) parts[branch_of(split, col[r], 0)].push_back(r);
  return parts;
}

double pessimistic_extra_errors(double n, double e, double confidence) {
  if (n <= 0.0) return 0.0;
  if (e < 1.0) {
    const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
    if (e == 0.0) return base;
    return base + e * (pessimistic_extra_errors(n, 1.0, confidence) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - confidence);
  const double f = (e + 0.5) / n;
  const double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) /
                   (1 + z * z / n);
  return r * n - e;
}

AttackClass majority_class(const ClassCounts& counts, const ClassCounts& prior) noexcept {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (counts[c] > counts[best] || (counts[c] == counts[best] && prior[c] > prior[best]))
      best = c;
  }
  return class_at(best);
}

}  // namespace chids
