#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "chids/anomaly.hpp"
#include "chids/kdd_data.hpp"
#include "synthetic_kdd.hpp"

namespace chids::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct RandomTableSpec {
  std::size_t rows = 60;
  std::size_t numeric = 3;
  std::size_t nominal = 1;
  std::size_t symbols = 3;       // per nominal feature
  std::size_t distinct = 12;     // numeric values drawn from this many levels
  std::size_t classes = 3;       // first n classes of the five
};

/// Small random dataset with labels loosely tied to the first feature.
/// Feature names are f0, f1, ...; nominal features come last.
Dataset random_dataset(std::mt19937_64& rng, const RandomTableSpec& spec);

/// The synthetic corpus parsed with the KDD schema.
Dataset synthetic_dataset(const SyntheticSpec& spec);

/// A time-ordered stream of random events over a handful of nodes and
/// messages, dense enough that every rule fires now and then.
std::vector<AnomalyEvent> random_stream(std::mt19937_64& rng, std::size_t events);

/// Rule thresholds drawn at random, always valid.
RuleConfig random_rule_config(std::mt19937_64& rng);

/// FNV-1a 64 of a file's bytes, as hex.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace chids::testing
