#include "chids/anomaly.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "chids/error.hpp"
#include "chids/random.hpp"

namespace chids {

namespace {

using Tag = AttackTag;

constexpr std::array<Tag, 2> kIntervalTags = {Tag::DoS, Tag::HelloFlood};
constexpr std::array<Tag, 2> kRetransmissionTags = {Tag::Sinkhole, Tag::SelectiveForwarding};
constexpr std::array<Tag, 1> kIntegrityTags = {Tag::ContentModification};
constexpr std::array<Tag, 1> kDelayTags = {Tag::DoS};
constexpr std::array<Tag, 1> kRepetitionTags = {Tag::DoS};
constexpr std::array<Tag, 3> kRadioTags = {Tag::Sybil, Tag::Wormhole, Tag::HelloFlood};
constexpr std::array<Tag, 1> kJammingTags = {Tag::Jamming};

template <typename Vec, typename Key>
auto find_key(Vec& v, const Key& key) {
  return std::find_if(v.begin(), v.end(), [&](const auto& p) { return p.first == key; });
}

template <typename Vec, typename Key>
void bump(Vec& v, const Key& key) {
  auto it = find_key(v, key);
  if (it == v.end())
    v.emplace_back(key, 1);
  else
    ++it->second;
}

template <typename Vec, typename Key>
void drop(Vec& v, const Key& key) {
  auto it = find_key(v, key);
  if (it == v.end()) return;
  if (--it->second == 0) v.erase(it);
}

}  // namespace

void RuleConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(interval_lower < interval_upper)) fail("interval_lower must be below interval_upper");
  if (!(rssi_min < rssi_max)) fail("rssi_min must be below rssi_max");
  if (!(retransmission_deadline > 0)) fail("retransmission_deadline must be positive");
  if (!(delay_window > 0)) fail("delay_window must be positive");
  if (!(window > 0)) fail("window must be positive");
  if (repetition_limit == 0) fail("repetition_limit must be positive");
  if (collision_limit == 0) fail("collision_limit must be positive");
  if (max_senders_per_message == 0) fail("max_senders_per_message must be positive");
}

std::string_view to_string(AnomalyRule rule) noexcept {
  switch (rule) {
    case AnomalyRule::Interval: return "Interval";
    case AnomalyRule::Retransmission: return "Retransmission";
    case AnomalyRule::Integrity: return "Integrity";
    case AnomalyRule::Delay: return "Delay";
    case AnomalyRule::Repetition: return "Repetition";
    case AnomalyRule::RadioRange: return "RadioRange";
    case AnomalyRule::Jamming: return "Jamming";
  }
  return "?";
}

std::optional<AnomalyRule> parse_anomaly_rule(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNumAnomalyRules; ++i) {
    const auto r = static_cast<AnomalyRule>(i);
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view to_string(AttackTag tag) noexcept {
  switch (tag) {
    case Tag::DoS: return "DoS";
    case Tag::HelloFlood: return "HelloFlood";
    case Tag::Sinkhole: return "Sinkhole";
    case Tag::SelectiveForwarding: return "SelectiveForwarding";
    case Tag::ContentModification: return "ContentModification";
    case Tag::Sybil: return "Sybil";
    case Tag::Wormhole: return "Wormhole";
    case Tag::Jamming: return "Jamming";
  }
  return "?";
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Reception: return "reception";
    case EventKind::ForwardObserved: return "forward";
    case EventKind::Collision: return "collision";
  }
  return "?";
}

std::span<const AttackTag> detectable_attacks(AnomalyRule rule) noexcept {
  switch (rule) {
    case AnomalyRule::Interval: return kIntervalTags;
    case AnomalyRule::Retransmission: return kRetransmissionTags;
    case AnomalyRule::Integrity: return kIntegrityTags;
    case AnomalyRule::Delay: return kDelayTags;
    case AnomalyRule::Repetition: return kRepetitionTags;
    case AnomalyRule::RadioRange: return kRadioTags;
    case AnomalyRule::Jamming: return kJammingTags;
  }
  return {};
}

AnomalyEngine::AnomalyEngine(RuleConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::size_t AnomalyEngine::state_size() const noexcept {
  return window_.size() + expectations_.size() + collisions_.size() + last_reception_.size();
}

void AnomalyEngine::expire(double now, std::vector<RuleVerdict>& out) {
  while (!window_.empty() && window_.front().time < now - cfg_.window) {
    const auto& old = window_.front();
    auto it = messages_.find(old.message);
    if (it != messages_.end()) {
      drop(it->second.digests, old.digest);
      if (old.reception) drop(it->second.senders, old.source);
      if (it->second.digests.empty() && it->second.senders.empty()) messages_.erase(it);
    }
    window_.pop_front();
  }
  while (!collisions_.empty() && collisions_.front() < now - cfg_.window) collisions_.pop_front();
  while (!expectations_.empty() &&
         expectations_.front().time + cfg_.retransmission_deadline < now) {
    const auto& e = expectations_.front();
    if (!e.matched) {
      out.push_back({AnomalyRule::Retransmission, e.event, e.time + cfg_.retransmission_deadline,
                     e.forwarder, e.message});
    }
    expectations_.pop_front();
  }
}

std::vector<RuleVerdict> AnomalyEngine::process(const AnomalyEvent& ev) {
  if (next_index_ > 0 && ev.timestamp < last_time_) {
    throw Error(ErrorCode::UnorderedStream,
                "event " + std::to_string(next_index_) + " goes back in time (" +
                    std::to_string(ev.timestamp) + " < " + std::to_string(last_time_) + ")");
  }
  const std::size_t index = next_index_++;
  last_time_ = ev.timestamp;
  const double now = ev.timestamp;

  std::vector<RuleVerdict> out;
  expire(now, out);
  auto emit = [&](AnomalyRule rule) {
    out.push_back({rule, index, now, ev.source, ev.message});
  };

  if (ev.kind == EventKind::Collision) {
    collisions_.push_back(now);
    if (collisions_.size() > cfg_.collision_limit) emit(AnomalyRule::Jamming);
    peak_state_ = std::max(peak_state_, state_size());
    return out;
  }

  const bool reception = ev.kind == EventKind::Reception;

  if (reception) {
    auto [it, fresh] = last_reception_.try_emplace(ev.source, now);
    if (!fresh) {
      const double gap = now - it->second;
      it->second = now;
      if (gap < cfg_.interval_lower || gap > cfg_.interval_upper) emit(AnomalyRule::Interval);
    }
  }

  auto& msg = messages_[ev.message];
  const bool tampered = std::any_of(msg.digests.begin(), msg.digests.end(),
                                    [&](const auto& d) { return d.first != ev.digest; });
  if (tampered) emit(AnomalyRule::Integrity);

  if (!reception) {
    for (auto& e : expectations_) {
      if (e.matched || e.message != ev.message || e.forwarder != ev.source) continue;
      e.matched = true;
      if (now - e.time > cfg_.delay_window) emit(AnomalyRule::Delay);
      break;
    }
  }

  bump(msg.digests, ev.digest);
  if (reception) bump(msg.senders, ev.source);
  window_.push_back({now, ev.message, ev.digest, ev.source, reception});

  if (reception) {
    const auto self = find_key(msg.senders, ev.source);
    if (self != msg.senders.end() && self->second > cfg_.repetition_limit)
      emit(AnomalyRule::Repetition);
  }

  const bool out_of_band = ev.rssi < cfg_.rssi_min || ev.rssi > cfg_.rssi_max;
  const bool too_many_senders = reception && msg.senders.size() > cfg_.max_senders_per_message;
  if (out_of_band || too_many_senders) emit(AnomalyRule::RadioRange);

  if (reception && ev.neighbor != 0 && ev.neighbor != ev.source)
    expectations_.push_back({now, index, ev.message, ev.neighbor, false});

  peak_state_ = std::max(peak_state_, state_size());
  return out;
}

std::vector<RuleVerdict> evaluate_stream(std::span<const AnomalyEvent> events,
                                         const RuleConfig& cfg) {
  AnomalyEngine engine(cfg);
  std::vector<RuleVerdict> all;
  for (const auto& ev : events) {
    auto v = engine.process(ev);
    all.insert(all.end(), v.begin(), v.end());
  }
  return all;
}

VerdictIndex::VerdictIndex(std::size_t records, std::span<const RuleVerdict> verdicts)
    : flagged_(records, false), rules_(records) {
  for (const auto& v : verdicts) {
    if (v.event >= records) continue;
    flagged_[v.event] = true;
    auto& rules = rules_[v.event];
    if (std::find(rules.begin(), rules.end(), v.rule) == rules.end()) rules.push_back(v.rule);
  }
}

VerdictIndex VerdictIndex::from_flags(std::vector<bool> flags) {
  VerdictIndex index;
  index.rules_.resize(flags.size());
  index.flagged_ = std::move(flags);
  return index;
}

std::size_t VerdictIndex::flagged_count() const noexcept {
  return static_cast<std::size_t>(std::count(flagged_.begin(), flagged_.end(), true));
}

std::span<const AnomalyRule> VerdictIndex::rules_for(std::size_t record) const noexcept {
  if (record >= rules_.size()) return {};
  return rules_[record];
}

PacketPartition filter_packets(std::size_t records, const VerdictIndex& index) {
  PacketPartition p;
  for (std::size_t i = 0; i < records; ++i) (index.flagged(i) ? p.abnormal : p.pass).push_back(i);
  return p;
}

// ---------------------------------------------------------------------------
// Synthetic streams

namespace {

constexpr std::array<Scenario, 8> kScenarios = {
    Scenario::Benign,       Scenario::HelloFlood, Scenario::SelectiveForwarding,
    Scenario::Sinkhole,     Scenario::Modification, Scenario::Replay,
    Scenario::Sybil,        Scenario::Jamming};

constexpr std::array<AnomalyRule, 1> kHelloRules = {AnomalyRule::Interval};
constexpr std::array<AnomalyRule, 2> kSelectiveRules = {AnomalyRule::Retransmission,
                                                        AnomalyRule::Delay};
constexpr std::array<AnomalyRule, 2> kSinkholeRules = {AnomalyRule::Retransmission,
                                                       AnomalyRule::RadioRange};
constexpr std::array<AnomalyRule, 1> kModificationRules = {AnomalyRule::Integrity};
constexpr std::array<AnomalyRule, 1> kReplayRules = {AnomalyRule::Repetition};
constexpr std::array<AnomalyRule, 1> kSybilRules = {AnomalyRule::RadioRange};
constexpr std::array<AnomalyRule, 1> kJammingRules = {AnomalyRule::Jamming};

std::uint64_t digest_of(std::uint64_t message) {
  std::uint64_t z = message + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t message_id(std::uint32_t source, std::uint32_t seq) {
  return (static_cast<std::uint64_t>(source) << 32) | seq;
}

struct Builder {
  std::vector<AnomalyEvent> events;

  void reception(double t, std::uint32_t src, std::uint32_t next_hop, std::uint64_t msg,
                 std::uint64_t digest, double rssi) {
    events.push_back({t, src, next_hop, EventKind::Reception, msg, digest, rssi});
  }
  void forward(double t, std::uint32_t by, std::uint64_t msg, std::uint64_t digest, double rssi) {
    events.push_back({t, by, 0, EventKind::ForwardObserved, msg, digest, rssi});
  }
  void collision(double t, std::uint32_t monitor) {
    events.push_back({t, monitor, 0, EventKind::Collision, 0, 0, -60.0});
  }
};

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::Benign: return "benign";
    case Scenario::HelloFlood: return "hello-flood";
    case Scenario::SelectiveForwarding: return "selective-forwarding";
    case Scenario::Sinkhole: return "sinkhole";
    case Scenario::Modification: return "modification";
    case Scenario::Replay: return "replay";
    case Scenario::Sybil: return "sybil";
    case Scenario::Jamming: return "jamming";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : kScenarios)
    if (to_string(s) == name) return s;
  throw Error(ErrorCode::UnknownScenario, "unknown scenario: " + std::string(name));
}

std::span<const Scenario> all_scenarios() noexcept { return kScenarios; }

std::span<const AnomalyRule> designated_rules(Scenario s) noexcept {
  switch (s) {
    case Scenario::Benign: return {};
    case Scenario::HelloFlood: return kHelloRules;
    case Scenario::SelectiveForwarding: return kSelectiveRules;
    case Scenario::Sinkhole: return kSinkholeRules;
    case Scenario::Modification: return kModificationRules;
    case Scenario::Replay: return kReplayRules;
    case Scenario::Sybil: return kSybilRules;
    case Scenario::Jamming: return kJammingRules;
  }
  return {};
}

std::vector<AnomalyEvent> generate_stream(Scenario scenario, std::uint64_t seed,
                                          const StreamShape& shape) {
  Rng rng(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(scenario));
  Builder b;
  const std::uint32_t nodes = std::max<std::uint32_t>(shape.nodes, 3);
  constexpr std::uint32_t kMonitor = 1000;

  // Node roles for the attack scenarios. Node 1 is the misbehaving relay.
  const std::uint32_t bad_relay = 1;
  std::uint32_t bad_relay_jobs = 0;

  // Regular traffic: every node reports every 2-8 s; most reports are to be
  // relayed by the next node in the ring, which does so within 0.05-0.8 s.
  for (std::uint32_t src = 1; src <= nodes; ++src) {
    const std::uint32_t relay = src % nodes + 1;
    double t = rng.uniform(0.0, 3.0);
    std::uint32_t seq = 0;
    while (t < shape.duration) {
      const std::uint64_t msg = message_id(src, ++seq);
      const std::uint64_t digest = digest_of(msg);
      const bool relayed = rng.chance(0.7) || relay == bad_relay;
      b.reception(t, src, relayed ? relay : 0, msg, digest, rng.uniform(-85.0, -45.0));
      if (relayed) {
        double lag = rng.uniform(0.05, 0.8);
        bool drop_it = false;
        std::uint64_t fwd_digest = digest;
        if (relay == bad_relay) {
          const std::uint32_t k = bad_relay_jobs++;
          switch (scenario) {
            case Scenario::SelectiveForwarding:
              // Drops every third message and stalls the one after it.
              if (k % 3 == 0) drop_it = true;
              else if (k % 3 == 1) lag = rng.uniform(1.2, 1.9);
              break;
            case Scenario::Sinkhole:
              drop_it = true;
              break;
            case Scenario::Modification:
              if (k % 2 == 0) fwd_digest = digest ^ 0xdeadbeefULL;
              break;
            default:
              break;
          }
        }
        if (!drop_it) b.forward(t + lag, relay, msg, fwd_digest, rng.uniform(-85.0, -45.0));
      }
      t += rng.uniform(2.0, 8.0);
    }
  }

  // Background collisions at most one per 3 s.
  for (double t = rng.uniform(1.0, 5.0); t < shape.duration; t += rng.uniform(3.0, 15.0))
    b.collision(t, kMonitor);

  const double mid = shape.duration / 2.0;
  switch (scenario) {
    case Scenario::Benign:
    case Scenario::SelectiveForwarding:
    case Scenario::Modification:
      break;
    case Scenario::HelloFlood: {
      const std::uint32_t flooder = nodes + 1;
      for (std::uint32_t k = 0; k < 20; ++k) {
        const std::uint64_t msg = message_id(flooder, k + 1);
        b.reception(mid + 0.1 * k, flooder, 0, msg, digest_of(msg), rng.uniform(-60.0, -30.0));
      }
      break;
    }
    case Scenario::Sinkhole: {
      // The sinkhole advertises an implausibly strong link.
      for (std::uint32_t k = 0; k < 5; ++k) {
        const std::uint64_t msg = message_id(bad_relay, 100000 + k);
        b.reception(mid + 4.0 * k, bad_relay, 0, msg, digest_of(msg), rng.uniform(-15.0, -5.0));
      }
      break;
    }
    case Scenario::Replay: {
      const std::uint32_t victim = 2;
      const std::uint64_t msg = message_id(victim, 1);
      for (std::uint32_t k = 0; k < 5; ++k)
        b.reception(mid + 1.0 * k, victim, 0, msg, digest_of(msg), rng.uniform(-85.0, -45.0));
      break;
    }
    case Scenario::Sybil: {
      const std::uint64_t msg = message_id(nodes + 1, 1);
      for (std::uint32_t k = 0; k < 3; ++k)
        b.reception(mid + 0.7 * k, nodes + 10 + k, 0, msg, digest_of(msg),
                    rng.uniform(-85.0, -45.0));
      break;
    }
    case Scenario::Jamming: {
      for (std::uint32_t k = 0; k < 12; ++k) b.collision(mid + 0.4 * k, kMonitor);
      break;
    }
  }

  std::stable_sort(b.events.begin(), b.events.end(),
                   [](const AnomalyEvent& x, const AnomalyEvent& y) {
                     return x.timestamp < y.timestamp;
                   });
  // Trailing heartbeat so pending forward deadlines inside the horizon resolve.
  const double end = b.events.empty() ? shape.duration : b.events.back().timestamp;
  b.events.push_back({end + 3.0, kMonitor, 0, EventKind::Collision, 0, 0, -60.0});
  return std::move(b.events);
}

}  // namespace chids
