#include "chids/metrics.hpp"

#include <chrono>
#include <vector>

#include "chids/error.hpp"
#include "chids/parallel.hpp"

namespace chids {

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto& row : counts)
    for (auto v : row) t += v;
  return t;
}

std::uint64_t ConfusionMatrix::actual_total(AttackClass actual) const noexcept {
  std::uint64_t t = 0;
  for (auto v : counts[index_of(actual)]) t += v;
  return t;
}

std::uint64_t ConfusionMatrix::predicted_total(AttackClass predicted) const noexcept {
  std::uint64_t t = 0;
  for (const auto& row : counts) t += row[index_of(predicted)];
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) noexcept {
  for (std::size_t a = 0; a < kNumClasses; ++a)
    for (std::size_t p = 0; p < kNumClasses; ++p) counts[a][p] += other.counts[a][p];
  return *this;
}

MetricsReport summarize(const ConfusionMatrix& m) {
  MetricsReport r;
  r.records = m.total();
  r.normals = m.actual_total(AttackClass::Normal);
  r.attacks = r.records - r.normals;
  r.detection.den = r.attacks;
  std::uint64_t attacks_missed = 0;
  for (AttackClass actual : kAllClasses)
    if (is_attack(actual)) attacks_missed += m.at(actual, AttackClass::Normal);
  r.detection.num = r.attacks - attacks_missed;
  r.false_alarm = {r.normals - m.at(AttackClass::Normal, AttackClass::Normal), r.normals};
  r.accuracy.den = r.records;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const AttackClass k = class_at(c);
    r.accuracy.num += m.counts[c][c];
    r.recall[c] = {m.counts[c][c], m.actual_total(k)};
    r.precision[c] = {m.counts[c][c], m.predicted_total(k)};
  }
  return r;
}

Evaluation evaluate(const Classifier& model, const Dataset& test, unsigned threads) {
  if (test.empty()) throw Error(ErrorCode::EmptyTestSet, "test set is empty");
  std::vector<AttackClass> predicted(test.size());
  const auto start = std::chrono::steady_clock::now();
  parallel_for(test.size(), threads,
               [&](std::size_t i) { predicted[i] = model.predict(test.records[i]); });
  const auto stop = std::chrono::steady_clock::now();

  Evaluation ev;
  for (std::size_t i = 0; i < test.size(); ++i)
    ev.matrix.add(test.records[i].category, predicted[i]);
  ev.report = summarize(ev.matrix);
  ev.report.test_seconds = std::chrono::duration<double>(stop - start).count();
  return ev;
}

}  // namespace chids
