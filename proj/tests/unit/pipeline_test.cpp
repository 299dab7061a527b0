#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <sstream>

#include "chids/error.hpp"
#include "chids/pipeline.hpp"
#include "fixtures.hpp"

namespace chids {
namespace {

// Attack when the first value is positive; counts its own calls.
class SignModel final : public Classifier {
 public:
  using Classifier::predict;
  AttackClass predict(std::span<const double> values) const override {
    check_width(values, 2);
    calls.fetch_add(1);
    return values[0] > 0 ? AttackClass::DoS : AttackClass::Normal;
  }
  std::size_t feature_count() const noexcept override { return 2; }
  mutable std::atomic<std::size_t> calls{0};
};

std::vector<std::vector<double>> random_records(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::vector<double>> out(n);
  for (auto& r : out) r = {u(rng), u(rng)};
  return out;
}

TEST(PipelineProperty, ComposesFilterThenMisuseThenDecision) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = rng() % 200;
    const auto records = random_records(rng, n);
    std::vector<bool> flags(n);
    for (std::size_t i = 0; i < n; ++i) flags[i] = rng() % 3 == 0;
    const auto verdicts = VerdictIndex::from_flags(flags);
    const auto policy = trial % 2 ? DecisionPolicy::TrustMisuse : DecisionPolicy::AlertUnresolved;
    SignModel model;
    const auto result = run_pipeline(records, verdicts, model, {.policy = policy, .threads = 1u + trial % 4});

    ASSERT_EQ(result.dispositions.size(), n);
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = result.dispositions[i];
      EXPECT_EQ(d.record, i);
      if (!flags[i]) {
        EXPECT_EQ(d.outcome, Outcome::PassedNormal);
        EXPECT_EQ(d.stage, Stage::Anomaly);
        continue;
      }
      ++flagged;
      if (records[i][0] > 0) {
        EXPECT_EQ(d.outcome, Outcome::ClassifiedAttack);
        EXPECT_EQ(d.stage, Stage::Misuse);
        EXPECT_EQ(d.attack, AttackClass::DoS);
      } else {
        EXPECT_EQ(d.stage, Stage::Decision);
        EXPECT_EQ(d.outcome, policy == DecisionPolicy::AlertUnresolved ? Outcome::UnresolvedAlert
                                                                       : Outcome::ClassifiedNormal);
      }
    }
    EXPECT_EQ(result.misuse_invocations, flagged);
    EXPECT_EQ(model.calls.load(), flagged);
  }
}

TEST(Pipeline, FivePercentFlaggedMeansFiveCalls) {
  std::mt19937_64 rng(72);
  const auto records = random_records(rng, 100);
  std::vector<bool> flags(100, false);
  for (std::size_t i : {3, 17, 42, 66, 99}) flags[i] = true;
  SignModel model;
  const auto result = run_pipeline(records, VerdictIndex::from_flags(flags), model, {.threads = 8});
  EXPECT_EQ(result.misuse_invocations, 5u);
  EXPECT_EQ(model.calls.load(), 5u);
}

TEST(Pipeline, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(73);
  const auto records = random_records(rng, 500);
  std::vector<bool> flags(500);
  for (std::size_t i = 0; i < 500; ++i) flags[i] = i % 7 == 0;
  const auto verdicts = VerdictIndex::from_flags(flags);
  SignModel a, b;
  EXPECT_EQ(run_pipeline(records, verdicts, a, {.threads = 1}).dispositions,
            run_pipeline(records, verdicts, b, {.threads = 8}).dispositions);
}

TEST(Pipeline, AlertsAndDumps) {
  const std::vector<std::vector<double>> records{{1, 0}, {-1, 0}, {1, 0}, {-1, 0}};
  const std::vector<RuleVerdict> v{{.rule = AnomalyRule::Integrity, .event = 0},
                                   {.rule = AnomalyRule::Delay, .event = 1},
                                   {.rule = AnomalyRule::Jamming, .event = 1}};
  const VerdictIndex verdicts(records.size(), v);
  const std::vector<double> ts{0.5, 1.25, 2.0, 3.0};
  SignModel model;
  const auto result = run_pipeline(records, verdicts, model, {}, ts);
  EXPECT_EQ(result.misuse_invocations, 2u);
  std::ostringstream alerts;
  EXPECT_EQ(emit_alerts(result.dispositions, verdicts, alerts), 2u);
  EXPECT_EQ(alerts.str(),
            "ts=0.500000 record=0 stage=Misuse outcome=ClassifiedAttack class=DoS rules=Integrity\n"
            "ts=1.250000 record=1 stage=Decision outcome=UnresolvedAlert rules=Delay,Jamming\n");

  const auto trusting = run_pipeline(records, verdicts, model, {.policy = DecisionPolicy::TrustMisuse}, ts);
  std::ostringstream fewer;
  EXPECT_EQ(emit_alerts(trusting.dispositions, verdicts, fewer), 1u);

  std::ostringstream dump;
  write_dispositions(dump, result.dispositions);
  EXPECT_EQ(dump.str().substr(0, dump.str().find('\n')), "record\tstage\toutcome\tclass");

  testing::TempDir dir;
  const auto missing = dir / "no-such-dir" / "alerts.log";
  EXPECT_THROW(emit_alerts(result.dispositions, verdicts, missing), Error);
  try {
    emit_alerts(result.dispositions, verdicts, missing);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SinkUnavailable);
  }
}

TEST(Pipeline, MismatchedInputsAndPolicyNames) {
  const std::vector<std::vector<double>> records{{1, 0}, {1, 0}};
  SignModel model;
  const std::vector<double> ts{1.0};
  EXPECT_THROW(run_pipeline(records, VerdictIndex::from_flags({true, true}), model, {}, ts), Error);
  const std::vector<std::vector<double>> narrow{{1}};
  EXPECT_THROW(run_pipeline(narrow, VerdictIndex::from_flags({true}), model, {}), Error);
  EXPECT_EQ(parse_decision_policy("trust-misuse"), DecisionPolicy::TrustMisuse);
  EXPECT_EQ(parse_decision_policy(to_string(DecisionPolicy::AlertUnresolved)), DecisionPolicy::AlertUnresolved);
  EXPECT_THROW(parse_decision_policy("maybe"), Error);
}

}  // namespace
}  // namespace chids
