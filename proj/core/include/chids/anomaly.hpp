#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chids {

/// What the cluster head observed.
///  - Reception: `message` arrived from `source`; `neighbor` is the next hop
///    expected to forward it onward (0 when the cluster head is the sink).
///  - ForwardObserved: `source` was overheard forwarding `message`.
///  - Collision: a transmission of the cluster head collided.
enum class EventKind : std::uint8_t { Reception, ForwardObserved, Collision };

struct AnomalyEvent {
  double timestamp = 0.0;  // seconds, non-decreasing within a stream
  std::uint32_t source = 0;
  std::uint32_t neighbor = 0;
  EventKind kind = EventKind::Reception;
  std::uint64_t message = 0;
  std::uint64_t digest = 0;  // opaque integrity token
  double rssi = -60.0;       // dBm

  friend bool operator==(const AnomalyEvent&, const AnomalyEvent&) = default;
};

/// Thresholds for the seven rules. The defaults are for the synthetic
/// harness and are expected to be tuned per deployment.
struct RuleConfig {
  double interval_lower = 0.5;          // s
  double interval_upper = 30.0;         // s
  double retransmission_deadline = 2.0; // s
  double delay_window = 1.0;            // s
  std::size_t repetition_limit = 3;
  double rssi_min = -95.0;              // dBm
  double rssi_max = -20.0;              // dBm
  std::size_t max_senders_per_message = 1;
  std::size_t collision_limit = 5;
  double window = 10.0;                 // s, sliding window for counted rules

  /// Throws InvalidConfig.
  void validate() const;
};

enum class AnomalyRule : std::uint8_t {
  Interval,
  Retransmission,
  Integrity,
  Delay,
  Repetition,
  RadioRange,
  Jamming,
};

inline constexpr std::size_t kNumAnomalyRules = 7;

enum class AttackTag : std::uint8_t {
  DoS,
  HelloFlood,
  Sinkhole,
  SelectiveForwarding,
  ContentModification,
  Sybil,
  Wormhole,
  Jamming,
};

std::string_view to_string(AnomalyRule rule) noexcept;
std::string_view to_string(AttackTag tag) noexcept;
std::string_view to_string(EventKind kind) noexcept;
std::optional<AnomalyRule> parse_anomaly_rule(std::string_view name) noexcept;

/// Attacks each rule is able to reveal.
std::span<const AttackTag> detectable_attacks(AnomalyRule rule) noexcept;

struct RuleVerdict {
  AnomalyRule rule = AnomalyRule::Interval;
  std::size_t event = 0;     // index of the offending event in the stream
  double timestamp = 0.0;    // when the violation became certain
  std::uint32_t source = 0;  // node held responsible
  std::uint64_t message = 0;

  std::span<const AttackTag> tags() const noexcept { return detectable_attacks(rule); }
  friend bool operator==(const RuleVerdict&, const RuleVerdict&) = default;
  friend auto operator<=>(const RuleVerdict& a, const RuleVerdict& b) {
    return std::tie(a.event, a.rule, a.source, a.message) <=>
           std::tie(b.event, b.rule, b.source, b.message);
  }
};

/// Streaming evaluator. Verdicts are never retracted: whatever is emitted
/// for a prefix of a stream is also emitted for the full stream. A forward
/// expectation whose deadline has not passed by the last event stays
/// pending and produces no verdict.
class AnomalyEngine {
 public:
  explicit AnomalyEngine(RuleConfig cfg);

  /// Throws UnorderedStream if event.timestamp goes backwards.
  std::vector<RuleVerdict> process(const AnomalyEvent& event);

  std::size_t events_seen() const noexcept { return next_index_; }
  /// Entries currently held across all sliding windows and pending queues.
  std::size_t state_size() const noexcept;
  std::size_t peak_state_size() const noexcept { return peak_state_; }

 private:
  struct WindowEntry {
    double time;
    std::uint64_t message;
    std::uint64_t digest;
    std::uint32_t source;
    bool reception;
  };
  struct MessageState {
    std::vector<std::pair<std::uint64_t, std::size_t>> digests;  // digest -> in-window count
    std::vector<std::pair<std::uint32_t, std::size_t>> senders;  // source -> in-window receptions
  };
  struct Expectation {
    double time;
    std::size_t event;
    std::uint64_t message;
    std::uint32_t forwarder;
    bool matched;
  };

  void expire(double now, std::vector<RuleVerdict>& out);

  RuleConfig cfg_;
  std::size_t next_index_ = 0;
  double last_time_ = 0.0;
  std::unordered_map<std::uint32_t, double> last_reception_;
  std::deque<WindowEntry> window_;
  std::unordered_map<std::uint64_t, MessageState> messages_;
  std::deque<Expectation> expectations_;
  std::deque<double> collisions_;
  std::size_t peak_state_ = 0;
};

/// Runs a whole stream through a fresh engine.
std::vector<RuleVerdict> evaluate_stream(std::span<const AnomalyEvent> events,
                                         const RuleConfig& cfg);

/// Which records the anomaly stage flagged. Verdict i flags the record with
/// the same index as its event; verdicts past the record count are ignored.
class VerdictIndex {
 public:
  VerdictIndex() = default;
  VerdictIndex(std::size_t records, std::span<const RuleVerdict> verdicts);
  static VerdictIndex from_flags(std::vector<bool> flags);

  std::size_t size() const noexcept { return flagged_.size(); }
  bool flagged(std::size_t record) const noexcept {
    return record < flagged_.size() && flagged_[record];
  }
  std::size_t flagged_count() const noexcept;
  /// Rules that fired for the record (empty when built from flags).
  std::span<const AnomalyRule> rules_for(std::size_t record) const noexcept;

 private:
  std::vector<bool> flagged_;
  std::vector<std::vector<AnomalyRule>> rules_;
};

struct PacketPartition {
  std::vector<std::size_t> pass;      // no verdict: forwarded as normal
  std::vector<std::size_t> abnormal;  // handed to misuse detection
};

/// Exact, order-preserving partition of record indices [0, records).
PacketPartition filter_packets(std::size_t records, const VerdictIndex& index);

template <typename Record>
std::pair<std::vector<Record>, std::vector<Record>> filter_packets(std::span<const Record> records,
                                                                   const VerdictIndex& index) {
  std::pair<std::vector<Record>, std::vector<Record>> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    (index.flagged(i) ? out.second : out.first).push_back(records[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic streams

enum class Scenario : std::uint8_t {
  Benign,
  HelloFlood,
  SelectiveForwarding,
  Sinkhole,
  Modification,
  Replay,
  Sybil,
  Jamming,
};

std::string_view to_string(Scenario s) noexcept;
/// Throws UnknownScenario.
Scenario parse_scenario(std::string_view name);
std::span<const Scenario> all_scenarios() noexcept;

/// Rules the scenario is built to trip (empty for Benign).
std::span<const AnomalyRule> designated_rules(Scenario s) noexcept;

struct StreamShape {
  double duration = 120.0;  // s
  std::uint32_t nodes = 8;
};

/// Deterministic for a given (scenario, seed, shape). Benign streams break
/// no rule under the default RuleConfig.
std::vector<AnomalyEvent> generate_stream(Scenario scenario, std::uint64_t seed,
                                          const StreamShape& shape = {});

}  // namespace chids
