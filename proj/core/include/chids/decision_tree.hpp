#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chids/classifier.hpp"
#include "chids/learning_table.hpp"

namespace chids {

struct DecisionNode {
  ClassCounts distribution{};
  AttackClass predicted = AttackClass::Normal;

  // Split data; meaningful only when children is non-empty.
  SplitChoice split;
  std::size_t fallback = 0;  // branch for symbols unseen in training
  std::vector<DecisionNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
  std::size_t coverage() const noexcept;
  std::size_t leaves() const noexcept;
  std::size_t depth() const noexcept;
};

/// C4.5-style tree: gain-ratio splits, multiway nominal tests, optional
/// pessimistic subtree replacement.
class DecisionTree final : public Classifier {
 public:
  DecisionTree(DecisionNode root, std::size_t features) : root_(std::move(root)), features_(features) {}

  using Classifier::predict;
  AttackClass predict(std::span<const double> values) const override;
  std::size_t feature_count() const noexcept override { return features_; }
  const DecisionNode& root() const noexcept { return root_; }

 private:
  DecisionNode root_;
  std::size_t features_;
};

DecisionTree build_tree(const Dataset& train, const TreeParams& params = {});
DecisionNode build_tree(const LearningTable& table, std::span<const std::size_t> rows,
                        const TreeParams& params, const ClassCounts& prior);

/// Predicted errors of the subtree under the pessimistic estimate.
double estimated_errors(const DecisionNode& node, double confidence);

}  // namespace chids
