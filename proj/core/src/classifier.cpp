#include "chids/classifier.hpp"

#include <string>

#include "chids/error.hpp"
#include "chids/learning_table.hpp"

namespace chids {

void check_width(std::span<const double> values, std::size_t expected) {
  if (values.size() != expected)
    throw Error(ErrorCode::SchemaMismatch, "model expects " + std::to_string(expected) +
                                               " features, record has " +
                                               std::to_string(values.size()));
}

AttackClass MajorityBaseline::predict(std::span<const double> values) const {
  check_width(values, features_);
  return answer_;
}

MajorityBaseline train_majority_baseline(const Dataset& train) {
  const ClassCounts counts = train.class_counts();
  return MajorityBaseline(majority_class(counts, counts), train.schema.size());
}

}  // namespace chids
