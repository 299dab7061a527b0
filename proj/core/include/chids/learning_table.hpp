#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chids/attack_class.hpp"
#include "chids/kdd_data.hpp"

namespace chids {

/// Column-major copy of a dataset used by the tree learners.
struct LearningTable {
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;
  std::vector<std::size_t> domain_sizes;  // nominal features; 0 for numeric
  std::vector<std::vector<double>> columns;
  std::vector<AttackClass> labels;

  static LearningTable from(const Dataset& data);

  std::size_t rows() const noexcept { return labels.size(); }
  std::size_t features() const noexcept { return columns.size(); }
};

struct TreeParams {
  std::size_t min_leaf = 2;
  double confidence = 0.25;
  bool prune = true;
};

/// One candidate test at a node.
struct SplitChoice {
  std::size_t feature = 0;
  FeatureKind kind = FeatureKind::Numeric;
  double threshold = 0.0;  // numeric: left branch takes v <= threshold
  std::size_t branches = 0;
  double gain = 0.0;
  double gain_ratio = 0.0;
};

double class_entropy(const ClassCounts& counts) noexcept;
ClassCounts count_classes(const LearningTable& table, std::span<const std::size_t> rows);

/// Best admissible split on one feature, or nothing when no test leaves at
/// least two branches with min_leaf rows and positive gain. Numeric
/// thresholds are only tried at class-boundary midpoints; ties go to the
/// lower threshold.
std::optional<SplitChoice> best_split_for_feature(const LearningTable& table,
                                                  std::span<const std::size_t> rows,
                                                  std::size_t feature, const TreeParams& params);

/// C4.5 selection: highest gain ratio among features whose gain is at least
/// the mean gain of all admissible features; ties go to the lower feature
/// index. Nothing when the rows are pure or too few to split.
std::optional<SplitChoice> choose_split(const LearningTable& table,
                                        std::span<const std::size_t> rows,
                                        const TreeParams& params);

/// Branch taken by value v under the split; nominal symbols outside the
/// training domain map to `fallback`.
std::size_t branch_of(const SplitChoice& split, double v, std::size_t fallback) noexcept;

std::vector<std::vector<std::size_t>> partition_rows(const LearningTable& table,
                                                     std::span<const std::size_t> rows,
                                                     const SplitChoice& split);

/// Upper confidence bound on extra errors at a leaf with n rows and e errors
/// (C4.5 pessimistic estimate).
double pessimistic_extra_errors(double n, double e, double confidence);

/// Majority class; ties go to the class with the larger prior count, then to
/// the fixed class order.
AttackClass majority_class(const ClassCounts& counts, const ClassCounts& prior) noexcept;

}  // namespace chids
