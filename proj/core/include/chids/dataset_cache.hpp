#pragma once

#include <filesystem>
#include <iosfwd>

#include "chids/kdd_data.hpp"

namespace chids {

/// Text cache of a processed dataset. Layout:
///
///   # chids-dataset-cache v1
///   features <n>
///   feature <name> numeric
///   feature <name> nominal <k> <sym_0> ... <sym_k-1>
///   records <m>
///   <v_0>,...,<v_n-1>,<label>          (m lines)
///
/// Numeric values use the shortest round-trip decimal form and nominal values
/// are written as symbols, so a read-back dataset compares equal to the
/// original including domain order.
void write_dataset_cache(const std::filesystem::path& path, const Dataset& data);
void write_dataset_cache(std::ostream& out, const Dataset& data);

Dataset read_dataset_cache(const std::filesystem::path& path,
                           const ClassTaxonomy& taxonomy = ClassTaxonomy::kdd());
Dataset read_dataset_cache(std::istream& in,
                           const ClassTaxonomy& taxonomy = ClassTaxonomy::kdd());

/// The "features" block shared by the cache and model formats.
void write_schema_block(std::ostream& out, const FeatureSchema& schema);
FeatureSchema read_schema_block(std::istream& in);

}  // namespace chids
