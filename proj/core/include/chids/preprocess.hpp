#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chids/kdd_data.hpp"

namespace chids {

// ---------------------------------------------------------------------------
// Deduplication

/// Keeps the first occurrence of every (feature values, label) combination,
/// preserving the order of survivors.
Dataset dedupe(const Dataset& data);

/// 1 - after/before, or 0 when before is 0.
double reduction_rate(std::size_t before, std::size_t after) noexcept;

// ---------------------------------------------------------------------------
// Stratified train/test split

struct SplitSpec {
  std::size_t train_size = 20000;
  std::size_t test_size = 10000;
  /// Classes whose records are all used, two thirds to train.
  std::vector<AttackClass> minority = {AttackClass::Probe, AttackClass::R2L, AttackClass::U2R};
  std::uint64_t seed = 1;
};

struct ClassAllocation {
  std::size_t available = 0;
  std::size_t train = 0;
  std::size_t test = 0;

  friend bool operator==(const ClassAllocation&, const ClassAllocation&) = default;
};

/// Audit record of a split; written next to the caches.
struct SplitManifest {
  std::uint64_t seed = 0;
  std::size_t source_records = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<AttackClass> minority;
  std::array<ClassAllocation, kNumClasses> per_class{};
  // Counts before deduplication; zero unless the caller fills them in.
  std::size_t raw_records = 0;
  ClassCounts raw_per_class{};

  void write(std::ostream& out) const;
  /// Reads what write() produced; throws FormatError.
  static SplitManifest read(std::istream& in);

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

struct SplitResult {
  Dataset train;
  Dataset test;
  SplitManifest manifest;
};

/// Train share of a fully enumerated minority class: 2n/3 rounded half up.
std::size_t minority_train_share(std::size_t n) noexcept;

/// Distributes `slots` proportionally to `weights` by largest-remainder
/// apportionment. Remainder ties go to the lower index. Result sums to
/// `slots` whenever some weight is non-zero.
std::vector<std::size_t> apportion(std::size_t slots, std::span<const std::size_t> weights);

/// Throws InfeasibleSplit when the requested sizes cannot be met.
SplitResult stratified_split(const Dataset& data, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Feature pruning

/// The six constant or near-constant KDD features dropped before ranking.
const std::vector<std::string>& default_prune_set();

/// Drops the named features. Throws UnknownFeatureName.
Dataset prune_features(const Dataset& data, std::span<const std::string> names);

/// Keeps only the named features, in schema order. Throws UnknownFeatureName.
Dataset project_features(const Dataset& data, std::span<const std::string> keep);

// ---------------------------------------------------------------------------
// Statistical (z-score) normalization

struct FeatureStats {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  double mean = 0.0;
  double stddev = 0.0;  // population form
  std::size_t n = 0;
};

struct NormalizationStats {
  std::vector<FeatureStats> features;

  void write(std::ostream& out) const;
  static NormalizationStats read(std::istream& in);

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

inline bool operator==(const FeatureStats& a, const FeatureStats& b) {
  return a.name == b.name && a.kind == b.kind && a.mean == b.mean && a.stddev == b.stddev &&
         a.n == b.n;
}

NormalizationStats fit_normalizer(const Dataset& train, unsigned threads = 1);

/// (v - mean) / stddev for numeric features; 0 where stddev is 0. Throws
/// SchemaMismatch when the stats were fitted on a different feature layout.
Dataset apply_normalizer(const Dataset& data, const NormalizationStats& stats);

/// Normalizes a single record's values in place (same rules as above).
void normalize_values(std::span<double> values, const NormalizationStats& stats);

}  // namespace chids
