#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chids/attack_class.hpp"

namespace chids {

enum class FeatureKind { Numeric, Nominal };

struct FeatureDef {
  std::size_t index = 0;
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  /// Nominal symbols in order of first sighting; a symbol's position is the
  /// code stored in record values.
  std::vector<std::string> domain;
};

/// Value stored for a nominal symbol that is not part of a frozen domain.
inline constexpr double kUnknownSymbol = -1.0;

/// How parse_record treats a nominal symbol missing from the domain.
enum class SymbolPolicy {
  Grow,         ///< append it to the domain (training ingest)
  Strict,       ///< raise UnknownNominalSymbol
  MapUnknown,   ///< store kUnknownSymbol, leave the domain untouched
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureDef> features);

  /// The 41-feature KDD Cup '99 connection schema, nominal domains empty.
  static FeatureSchema kdd();

  std::size_t size() const noexcept { return features_.size(); }
  const FeatureDef& operator[](std::size_t i) const { return features_[i]; }
  const std::vector<FeatureDef>& features() const noexcept { return features_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownFeatureName.
  std::size_t index_of(std::string_view name) const;

  std::size_t count(FeatureKind kind) const noexcept;

  std::optional<std::size_t> symbol_code(std::size_t feature,
                                         std::string_view symbol) const;
  std::size_t intern(std::size_t feature, std::string_view symbol);
  const std::string& symbol(std::size_t feature, std::size_t code) const;

  friend bool operator==(const FeatureSchema& a, const FeatureSchema& b) {
    return a.features_.size() == b.features_.size() && a.same_as(b);
  }

 private:
  bool same_as(const FeatureSchema& other) const;
  void rebuild_lookup();

  std::vector<FeatureDef> features_;
  std::vector<std::unordered_map<std::string, std::size_t>> lookup_;
};

struct KddRecord {
  /// Numeric features hold their real value, nominal features their symbol
  /// code (see FeatureDef::domain).
  std::vector<double> values;
  std::string label;
  AttackClass category = AttackClass::Normal;

  friend bool operator==(const KddRecord&, const KddRecord&) = default;
};

/// Maps the 23 raw KDD labels onto the five traffic classes.
class ClassTaxonomy {
 public:
  static ClassTaxonomy kdd();

  /// Case-insensitive; a trailing period is ignored. Throws UnknownLabel.
  AttackClass classify(std::string_view label) const;
  std::optional<AttackClass> try_classify(std::string_view label) const;

  std::size_t size() const noexcept { return map_.size(); }
  std::vector<std::string> labels() const;
  std::vector<std::string> members(AttackClass c) const;

 private:
  std::unordered_map<std::string, AttackClass> map_;
};

AttackClass classify_label(std::string_view label, const ClassTaxonomy& taxonomy);

/// Lower-cased label with any trailing period removed.
std::string normalize_label(std::string_view label);

struct Dataset {
  FeatureSchema schema;
  std::vector<KddRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  ClassCounts class_counts() const noexcept;
};

/// Parses one comma-separated KDD line (41 features then the label).
KddRecord parse_record(std::string_view line, FeatureSchema& schema,
                       SymbolPolicy policy = SymbolPolicy::Grow);

/// Inverse of parse_record; numbers use the shortest round-trip form and the
/// label carries the customary trailing period.
std::string serialize_record(const KddRecord& record, const FeatureSchema& schema);

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct LoadOptions {
  SymbolPolicy policy = SymbolPolicy::Grow;
  /// Bad lines tolerated (and skipped) before the load is aborted.
  std::size_t error_budget = 0;
  /// Receives the skipped lines when non-null.
  std::vector<ParseIssue>* skipped = nullptr;
};

/// Reads plain or gzip-compressed KDD text.
Dataset load_dataset(const std::filesystem::path& path, FeatureSchema schema,
                     const ClassTaxonomy& taxonomy, const LoadOptions& options = {});

Dataset read_dataset(std::istream& in, FeatureSchema schema,
                     const ClassTaxonomy& taxonomy, const LoadOptions& options = {});

}  // namespace chids
