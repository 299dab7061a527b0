#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "chids/part.hpp"
#include "chids/preprocess.hpp"

namespace chids {

/// What `train` writes and `evaluate`/`detect` read: the frozen training
/// normalizer and the PART rule list, both over the selected features.
struct ModelBundle {
  NormalizationStats normalizer;
  RuleSet rules;

  /// Maps a raw record (any schema containing the model's features by name)
  /// onto the model layout and normalizes it. Symbols the model never saw
  /// become kUnknownSymbol. Throws SchemaMismatch if a feature is missing.
  std::vector<double> prepare(const KddRecord& raw, const FeatureSchema& raw_schema) const;

  void write(std::ostream& out) const;
  static ModelBundle read(std::istream& in);

  void save(const std::filesystem::path& path) const;
  static ModelBundle load(const std::filesystem::path& path);
};

}  // namespace chids
