#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "chids/attack_class.hpp"
#include "chids/classifier.hpp"
#include "chids/kdd_data.hpp"

namespace chids {

/// counts[actual][predicted].
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

  void add(AttackClass actual, AttackClass predicted, std::uint64_t n = 1) noexcept {
    counts[index_of(actual)][index_of(predicted)] += n;
  }
  std::uint64_t at(AttackClass actual, AttackClass predicted) const noexcept {
    return counts[index_of(actual)][index_of(predicted)];
  }
  std::uint64_t total() const noexcept;
  std::uint64_t actual_total(AttackClass actual) const noexcept;
  std::uint64_t predicted_total(AttackClass predicted) const noexcept;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// num/den kept exact; percent() is 0 when den is 0.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  double percent() const noexcept {
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct MetricsReport {
  std::uint64_t records = 0;
  std::uint64_t attacks = 0;
  std::uint64_t normals = 0;
  // Attack records predicted as any attack class, whichever one.
  Ratio detection;
  // Normal records predicted as any attack class.
  Ratio false_alarm;
  // Exact five-class agreement.
  Ratio accuracy;
  std::array<Ratio, kNumClasses> recall{};
  std::array<Ratio, kNumClasses> precision{};
  double train_seconds = 0.0;
  double test_seconds = 0.0;

  double detection_rate() const noexcept { return detection.percent(); }
  double false_alarm_rate() const noexcept { return false_alarm.percent(); }
};

/// Everything except the timings, derived from the matrix.
MetricsReport summarize(const ConfusionMatrix& matrix);

struct Evaluation {
  ConfusionMatrix matrix;
  MetricsReport report;
};

/// Predicts every test record (in parallel when threads > 1) and times the
/// prediction loop. Throws EmptyTestSet.
Evaluation evaluate(const Classifier& model, const Dataset& test, unsigned threads = 1);

}  // namespace chids
