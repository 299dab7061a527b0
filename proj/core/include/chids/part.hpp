#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chids/classifier.hpp"
#include "chids/learning_table.hpp"

namespace chids {

enum class TestOp { Equals, LessEq, Greater };

/// One atomic condition: feature = symbol code, feature <= t or feature > t.
struct RuleTest {
  std::size_t feature = 0;
  TestOp op = TestOp::LessEq;
  double value = 0.0;

  bool matches(double v) const noexcept;
  friend bool operator==(const RuleTest&, const RuleTest&) = default;
};

struct Rule {
  std::vector<RuleTest> tests;  // conjunction; empty means always true
  AttackClass consequent = AttackClass::Normal;
  std::size_t coverage = 0;
  std::size_t errors = 0;

  bool matches(std::span<const double> values) const noexcept;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Ordered decision list: the first matching rule decides, otherwise the
/// default class.
class RuleSet final : public Classifier {
 public:
  RuleSet(FeatureSchema schema, std::vector<Rule> rules, AttackClass default_class);

  using Classifier::predict;
  AttackClass predict(std::span<const double> values) const override;
  std::size_t feature_count() const noexcept override { return schema_.size(); }

  std::optional<std::size_t> first_match(std::span<const double> values) const noexcept;

  const FeatureSchema& schema() const noexcept { return schema_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  AttackClass default_class() const noexcept { return default_; }

  /// "IF service = http AND src_bytes <= 512 THEN Normal (cov=10, err=0)"
  std::string describe(const Rule& rule) const;

  /// Versioned text form; read(write(x)) reproduces x exactly.
  void write(std::ostream& out) const;
  static RuleSet read(std::istream& in);

  friend bool operator==(const RuleSet& a, const RuleSet& b) {
    return a.schema_ == b.schema_ && a.rules_ == b.rules_ && a.default_ == b.default_;
  }

 private:
  FeatureSchema schema_;
  std::vector<Rule> rules_;
  AttackClass default_;
};

/// A leaf reached while growing one partial tree, with its path.
struct PartialLeaf {
  std::vector<RuleTest> path;
  ClassCounts distribution{};
  AttackClass predicted = AttackClass::Normal;

  std::size_t coverage() const noexcept;
};

/// Grows one partial tree over `rows`: subsets are expanded in order of
/// increasing class entropy, expansion stops at the first subtree that does
/// not collapse into a leaf, and a node whose children are all leaves is
/// replaced by a leaf when the pessimistic estimate says so. Returns the
/// non-empty expanded leaves in depth-first order.
std::vector<PartialLeaf> grow_partial_tree(const LearningTable& table,
                                           std::span<const std::size_t> rows,
                                           const TreeParams& params, const ClassCounts& prior);

/// The rule read off the largest-coverage leaf of one partial tree (first
/// such leaf in depth-first order on ties).
Rule build_partial_tree_rule(const LearningTable& table, std::span<const std::size_t> rows,
                             const TreeParams& params, const ClassCounts& prior);
Rule build_partial_tree_rule(const Dataset& residual, const TreeParams& params = {});

/// Separate-and-conquer over partial trees until no records remain; the
/// default class is the training majority.
RuleSet train_part(const Dataset& train, const TreeParams& params = {});

/// Merges repeated bounds on the same numeric feature into the tightest pair.
std::vector<RuleTest> simplify_tests(std::span<const RuleTest> tests);

}  // namespace chids
