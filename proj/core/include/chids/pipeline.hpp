#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "chids/anomaly.hpp"
#include "chids/classifier.hpp"

namespace chids {

enum class Outcome : std::uint8_t { PassedNormal, ClassifiedAttack, ClassifiedNormal, UnresolvedAlert };
enum class Stage : std::uint8_t { Anomaly, Misuse, Decision };

/// What the decision step does with a flagged record the misuse model calls
/// Normal.
enum class DecisionPolicy : std::uint8_t { AlertUnresolved, TrustMisuse };

std::string_view to_string(Outcome o) noexcept;
std::string_view to_string(Stage s) noexcept;
std::string_view to_string(DecisionPolicy p) noexcept;
/// "alert-unresolved" or "trust-misuse"; throws InvalidConfig.
DecisionPolicy parse_decision_policy(std::string_view name);

struct Disposition {
  std::size_t record = 0;
  Outcome outcome = Outcome::PassedNormal;
  Stage stage = Stage::Anomaly;
  AttackClass attack = AttackClass::Normal;  // set for ClassifiedAttack
  double timestamp = 0.0;

  friend bool operator==(const Disposition&, const Disposition&) = default;
};

struct PipelineConfig {
  DecisionPolicy policy = DecisionPolicy::AlertUnresolved;
  unsigned threads = 1;
};

struct PipelineResult {
  std::vector<Disposition> dispositions;  // one per record, in record order
  std::size_t misuse_invocations = 0;
};

/// Anomaly filter, then misuse classification of flagged records only, then
/// the decision step. `records` are feature vectors in the model's layout;
/// `timestamps`, when given, is parallel to `records`.
PipelineResult run_pipeline(std::span<const std::vector<double>> records,
                            const VerdictIndex& verdicts, const Classifier& model,
                            const PipelineConfig& cfg, std::span<const double> timestamps = {});

/// One line per ClassifiedAttack or UnresolvedAlert; returns the line count.
std::size_t emit_alerts(std::span<const Disposition> dispositions, const VerdictIndex& verdicts,
                        std::ostream& sink);
/// Throws SinkUnavailable when the file cannot be opened.
std::size_t emit_alerts(std::span<const Disposition> dispositions, const VerdictIndex& verdicts,
                        const std::filesystem::path& sink);

/// Tab-separated dump (record, stage, outcome, class) with a header row.
void write_dispositions(std::ostream& out, std::span<const Disposition> dispositions);

}  // namespace chids
