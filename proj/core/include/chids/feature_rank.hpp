#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chids/kdd_data.hpp"

namespace chids {

/// Bin layout of one feature. Numeric features map value v to the number of
/// cut points strictly below v; nominal features use their symbol code, with
/// one trailing bin for unknown symbols.
struct FeatureBins {
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<double> cuts;       // strictly increasing
  std::size_t nominal_bins = 0;   // domain size (nominal only)

  std::size_t bin_count() const noexcept {
    return kind == FeatureKind::Numeric ? cuts.size() + 1 : nominal_bins + 1;
  }
  std::size_t bin_of(double v) const noexcept;
};

struct Discretization {
  std::vector<FeatureBins> features;
};

/// Supervised entropy discretization with the Fayyad-Irani MDL stopping rule
/// applied per numeric feature.
Discretization discretize(const Dataset& train, unsigned threads = 1);

/// MDL cut points for one numeric column. Exposed for testing.
std::vector<double> mdl_cut_points(std::span<const double> values,
                                   std::span<const AttackClass> classes);

enum class RankMethod { ChiSquared, InfoGainRatio };

std::string_view to_string(RankMethod m) noexcept;

struct FeatureScore {
  std::string feature;
  std::size_t index = 0;
  double score = 0.0;
  RankMethod method = RankMethod::ChiSquared;
};

/// Pearson chi-squared of the bin x class contingency table; cells with zero
/// expected count contribute nothing.
FeatureScore chi_squared_score(const Dataset& train, const Discretization& disc,
                               std::size_t feature);

/// Information gain over split information (log base 2); 0 when the binned
/// feature has zero split information.
FeatureScore info_gain_ratio_score(const Dataset& train, const Discretization& disc,
                                   std::size_t feature);

/// Scores every feature, in schema order.
std::vector<FeatureScore> rank_features(const Dataset& train, const Discretization& disc,
                                        RankMethod method, unsigned threads = 1);

/// Names of the k best features, best first. Ties go to the lower schema
/// index.
std::vector<std::string> select_top_k(std::span<const FeatureScore> scores, std::size_t k);

/// Scores sorted best first, same tie rule as select_top_k.
std::vector<FeatureScore> sort_by_rank(std::span<const FeatureScore> scores);

/// Tab-separated (rank, feature, method, score) with a header row.
void write_rank_report(std::ostream& out, std::span<const FeatureScore> scores);
/// Reads a rank report back in file order. `index` becomes the row
/// position, since the report does not carry schema indices. Throws
/// FormatError.
std::vector<FeatureScore> read_rank_report(std::istream& in);

}  // namespace chids
