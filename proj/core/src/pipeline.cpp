#include "chids/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "chids/error.hpp"
#include "chids/parallel.hpp"

namespace chids {

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::PassedNormal: return "PassedNormal";
    case Outcome::ClassifiedAttack: return "ClassifiedAttack";
    case Outcome::ClassifiedNormal: return "ClassifiedNormal";
    case Outcome::UnresolvedAlert: return "UnresolvedAlert";
  }
  return "?";
}

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Anomaly: return "Anomaly";
    case Stage::Misuse: return "Misuse";
    case Stage::Decision: return "Decision";
  }
  return "?";
}

std::string_view to_string(DecisionPolicy p) noexcept {
  return p == DecisionPolicy::AlertUnresolved ? "alert-unresolved" : "trust-misuse";
}

DecisionPolicy parse_decision_policy(std::string_view name) {
  if (name == "alert-unresolved") return DecisionPolicy::AlertUnresolved;
  if (name == "trust-misuse") return DecisionPolicy::TrustMisuse;
  throw Error(ErrorCode::InvalidConfig, "unknown decision policy: " + std::string(name));
}

PipelineResult run_pipeline(std::span<const std::vector<double>> records,
                            const VerdictIndex& verdicts, const Classifier& model,
                            const PipelineConfig& cfg, std::span<const double> timestamps) {
  if (!timestamps.empty() && timestamps.size() != records.size())
    throw Error(ErrorCode::SchemaMismatch, "timestamps are not parallel to records");

  PipelineResult result;
  result.dispositions.resize(records.size());
  std::atomic<std::size_t> calls{0};
  parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    Disposition& d = result.dispositions[i];
    d.record = i;
    d.timestamp = timestamps.empty() ? 0.0 : timestamps[i];
    if (!verdicts.flagged(i)) {
      d.outcome = Outcome::PassedNormal;
      d.stage = Stage::Anomaly;
      return;
    }
    calls.fetch_add(1, std::memory_order_relaxed);
    const AttackClass predicted = model.predict(records[i]);
    if (is_attack(predicted)) {
      d.outcome = Outcome::ClassifiedAttack;
      d.stage = Stage::Misuse;
      d.attack = predicted;
      return;
    }
    d.stage = Stage::Decision;
    d.outcome = cfg.policy == DecisionPolicy::AlertUnresolved ? Outcome::UnresolvedAlert
                                                              : Outcome::ClassifiedNormal;
  });
  result.misuse_invocations = calls.load();
  return result;
}

std::size_t emit_alerts(std::span<const Disposition> dispositions, const VerdictIndex& verdicts,
                        std::ostream& sink) {
  std::size_t lines = 0;
  char ts[64];
  for (const auto& d : dispositions) {
    if (d.outcome != Outcome::ClassifiedAttack && d.outcome != Outcome::UnresolvedAlert) continue;
    std::snprintf(ts, sizeof ts, "%.6f", d.timestamp);
    sink << "ts=" << ts << " record=" << d.record << " stage=" << to_string(d.stage)
         << " outcome=" << to_string(d.outcome);
    if (d.outcome == Outcome::ClassifiedAttack) sink << " class=" << to_string(d.attack);
    sink << " rules=";
    const auto rules = verdicts.rules_for(d.record);
    if (rules.empty()) sink << '-';
    for (std::size_t i = 0; i < rules.size(); ++i) sink << (i ? "," : "") << to_string(rules[i]);
    sink << '\n';
    ++lines;
  }
  if (!sink) throw Error(ErrorCode::SinkUnavailable, "alert sink rejected output");
  return lines;
}

std::size_t emit_alerts(std::span<const Disposition> dispositions, const VerdictIndex& verdicts,
                        const std::filesystem::path& sink) {
  std::ofstream out(sink, std::ios::binary);
  if (!out) throw Error(ErrorCode::SinkUnavailable, "cannot open alert sink " + sink.string());
  return emit_alerts(dispositions, verdicts, out);
}

void write_dispositions(std::ostream& out, std::span<const Disposition> dispositions) {
  out << "record\tstage\toutcome\tclass\n";
  for (const auto& d : dispositions) {
    out << d.record << '\t' << to_string(d.stage) << '\t' << to_string(d.outcome) << '\t'
        << (d.outcome == Outcome::ClassifiedAttack ? to_string(d.attack) : std::string_view("-"))
        << '\n';
  }
}

}  // namespace chids
