#pragma once

#include <cstddef>
#include <span>

#include "chids/attack_class.hpp"
#include "chids/kdd_data.hpp"

namespace chids {

/// Anything that maps a feature vector in its training layout to a class.
/// Trained models are immutable; predict is safe to call concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;

  /// Throws SchemaMismatch when values has the wrong width.
  virtual AttackClass predict(std::span<const double> values) const = 0;
  virtual std::size_t feature_count() const noexcept = 0;

  AttackClass predict(const KddRecord& record) const { return predict(record.values); }
};

/// Always answers the majority class of its training data.
class MajorityBaseline final : public Classifier {
 public:
  MajorityBaseline(AttackClass answer, std::size_t features) : answer_(answer), features_(features) {}

  using Classifier::predict;
  AttackClass predict(std::span<const double> values) const override;
  std::size_t feature_count() const noexcept override { return features_; }
  AttackClass answer() const noexcept { return answer_; }

 private:
  AttackClass answer_;
  std::size_t features_;
};

MajorityBaseline train_majority_baseline(const Dataset& train);

void check_width(std::span<const double> values, std::size_t expected);

}  // namespace chids
