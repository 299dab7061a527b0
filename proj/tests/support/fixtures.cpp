#include "fixtures.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace chids::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = fs::temp_directory_path() /
                     ("chids-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temp directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Dataset random_dataset(std::mt19937_64& rng, const RandomTableSpec& spec) {
  std::vector<FeatureDef> defs;
  for (std::size_t i = 0; i < spec.numeric + spec.nominal; ++i) {
    FeatureDef d;
    d.index = i;
    d.name = "f" + std::to_string(i);
    if (i >= spec.numeric) {
      d.kind = FeatureKind::Nominal;
      for (std::size_t s = 0; s < spec.symbols; ++s) d.domain.push_back("s" + std::to_string(s));
    }
    defs.push_back(std::move(d));
  }
  Dataset data{FeatureSchema(std::move(defs)), {}};

  std::uniform_int_distribution<std::size_t> level(0, spec.distinct - 1);
  std::uniform_int_distribution<std::size_t> symbol(0, spec.symbols - 1);
  std::uniform_int_distribution<std::size_t> klass(0, spec.classes - 1);
  std::bernoulli_distribution follow(0.7);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    KddRecord rec;
    for (std::size_t i = 0; i < spec.numeric; ++i)
      rec.values.push_back(static_cast<double>(level(rng)) * 0.5 - 1.0);
    for (std::size_t i = 0; i < spec.nominal; ++i)
      rec.values.push_back(static_cast<double>(symbol(rng)));
    std::size_t c = klass(rng);
    if (spec.numeric > 0 && follow(rng))
      c = static_cast<std::size_t>((rec.values[0] + 1.0) * 2.0) * spec.classes / spec.distinct;
    rec.category = class_at(std::min(c, spec.classes - 1));
    rec.label = std::string(to_string(rec.category));
    data.records.push_back(std::move(rec));
  }
  return data;
}

Dataset synthetic_dataset(const SyntheticSpec& spec) {
  std::istringstream in(synthetic_kdd_text(spec));
  return read_dataset(in, FeatureSchema::kdd(), ClassTaxonomy::kdd());
}

std::vector<AnomalyEvent> random_stream(std::mt19937_64& rng, std::size_t n) {
  std::vector<AnomalyEvent> events;
  std::uniform_int_distribution<std::uint32_t> node(1, 4);
  std::uniform_int_distribution<std::uint32_t> neighbor(0, 4);
  std::uniform_int_distribution<std::uint64_t> message(1, 6);
  std::uniform_int_distribution<std::uint64_t> digest(1, 2);
  std::uniform_int_distribution<int> kind(0, 9);
  std::exponential_distribution<double> gap(1.5);
  std::bernoulli_distribution same_time(0.1);
  std::bernoulli_distribution odd_rssi(0.05);
  std::uniform_real_distribution<double> rssi(-90.0, -30.0);
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!same_time(rng)) t += gap(rng);
    AnomalyEvent e;
    e.timestamp = t;
    const int k = kind(rng);
    e.kind = k < 6 ? EventKind::Reception : (k < 9 ? EventKind::ForwardObserved : EventKind::Collision);
    e.source = node(rng);
    e.neighbor = e.kind == EventKind::Reception ? neighbor(rng) : 0;
    e.message = e.kind == EventKind::Collision ? 0 : message(rng);
    e.digest = e.kind == EventKind::Collision ? 0 : digest(rng);
    e.rssi = odd_rssi(rng) ? (same_time(rng) ? -120.0 : 5.0) : rssi(rng);
    events.push_back(e);
  }
  return events;
}

RuleConfig random_rule_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> small(1, 4);
  RuleConfig c;
  c.interval_lower = 0.1 + u(rng);
  c.interval_upper = c.interval_lower + 0.5 + 5 * u(rng);
  c.retransmission_deadline = 0.2 + 3 * u(rng);
  c.delay_window = 0.1 + 2 * u(rng);
  c.repetition_limit = small(rng);
  c.max_senders_per_message = small(rng);
  c.collision_limit = small(rng);
  c.window = 0.5 + 8 * u(rng);
  return c;
}

std::string file_fingerprint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chids::testing
