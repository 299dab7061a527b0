#include "chids/decision_tree.hpp"

#include <algorithm>
#include <numeric>

namespace chids {

namespace {

double leaf_estimate(const ClassCounts& dist, AttackClass predicted, double confidence) {
  const double n = static_cast<double>(std::accumulate(dist.begin(), dist.end(), std::size_t{0}));
  if (n == 0.0) return 0.0;
  const double e = n - static_cast<double>(dist[index_of(predicted)]);
  return e + pessimistic_extra_errors(n, e, confidence);
}

void grow(DecisionNode& node, const LearningTable& table, std::span<const std::size_t> rows,
          const TreeParams& params, const ClassCounts& prior) {
  node.distribution = count_classes(table, rows);
  node.predicted = majority_class(node.distribution, prior);
  const auto split = choose_split(table, rows, params);
  if (!split) return;

  auto parts = partition_rows(table, rows, *split);
  node.split = *split;
  node.fallback = static_cast<std::size_t>(
      std::max_element(parts.begin(), parts.end(),
                       [](const auto& a, const auto& b) { return a.size() < b.size(); }) -
      parts.begin());
  node.children.resize(parts.size());
  for (std::size_t b = 0; b < parts.size(); ++b) {
    auto& child = node.children[b];
    if (parts[b].empty()) {
      // Empty branches answer with the parent's class.
      child.predicted = node.predicted;
      continue;
    }
    grow(child, table, parts[b], params, prior);
  }

  if (params.prune) {
    const double as_leaf = leaf_estimate(node.distribution, node.predicted, params.confidence);
    if (as_leaf <= estimated_errors(node, params.confidence) + 0.1) node.children.clear();
  }
}

}  // namespace

std::size_t DecisionNode::coverage() const noexcept {
  return std::accumulate(distribution.begin(), distribution.end(), std::size_t{0});
}

std::size_t DecisionNode::leaves() const noexcept {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaves();
  return n;
}

std::size_t DecisionNode::depth() const noexcept {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth() + 1);
  return d;
}

double estimated_errors(const DecisionNode& node, double confidence) {
  if (node.is_leaf()) return leaf_estimate(node.distribution, node.predicted, confidence);
  double sum = 0.0;
  for (const auto& c : node.children) sum += estimated_errors(c, confidence);
  return sum;
}

DecisionNode build_tree(const LearningTable& table, std::span<const std::size_t> rows,
                        const TreeParams& params, const ClassCounts& prior) {
  DecisionNode root;
  grow(root, table, rows, params, prior);
  return root;
}

DecisionTree build_tree(const Dataset& train, const TreeParams& params) {
  const auto table = LearningTable::from(train);
  std::vector<std::size_t> rows(table.rows());
  std::iota(rows.begin(), rows.end(), 0);
  const ClassCounts prior = count_classes(table, rows);
  return DecisionTree(build_tree(table, rows, params, prior), table.features());
}

AttackClass DecisionTree::predict(std::span<const double> values) const {
  check_width(values, features_);
  const DecisionNode* node = &root_;
  while (!node->is_leaf()) {
    const std::size_t b = branch_of(node->split, values[node->split.feature], node->fallback);
    node = &node->children[b];
  }
  return node->predicted;
}

}  // namespace chids
