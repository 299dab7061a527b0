#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "chids/anomaly.hpp"
#include "chids/feature_rank.hpp"
#include "chids/learning_table.hpp"
#include "chids/pipeline.hpp"
#include "chids/preprocess.hpp"

namespace chids::cli {

/// Everything a run depends on besides the dataset itself. Serialized as flat
/// `key = value` lines; `#` starts a comment.
struct RunConfig {
  std::filesystem::path dataset = "data/kddcup.data_10_percent.gz";
  std::filesystem::path out = "chids-out";
  unsigned threads = 1;
  bool ingest_strict = false;
  std::size_t ingest_error_budget = 0;
  SplitSpec split;
  std::vector<std::string> prune = default_prune_set();
  RankMethod select_method = RankMethod::ChiSquared;
  std::size_t select_k = 4;
  TreeParams part;
  RuleConfig anomaly;
  StreamShape stream;
  DecisionPolicy policy = DecisionPolicy::AlertUnresolved;

  /// Throws InvalidConfig for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  /// "key=value" as given to --set.
  void apply_override(std::string_view assignment);
  /// Without the runtime keys (out, threads) the text depends only on what
  /// shapes the results.
  void write(std::ostream& out, bool with_runtime = true) const;
  /// Throws InvalidConfig on contradictory settings.
  void validate() const;
};

RunConfig parse_config(std::istream& in);
/// Throws IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace chids::cli
