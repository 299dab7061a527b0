#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

namespace chids::testing {

/// Shape of a synthetic KDD-format corpus. Classes carry loose signatures in
/// the usual columns (service, src_bytes, the rate features), with overlap so
/// the learners have something to do.
struct SyntheticSpec {
  std::size_t normal = 3000;
  std::size_t dos = 2000;
  std::size_t probe = 300;
  std::size_t r2l = 120;
  std::size_t u2r = 24;
  // Share of emitted lines that repeat an earlier line of the same class.
  double duplicate_fraction = 0.2;
  std::uint64_t seed = 7;
};

/// Newline-terminated KDD lines with trailing-period labels, classes
/// interleaved in random order.
std::string synthetic_kdd_text(const SyntheticSpec& spec);

void write_synthetic_kdd(const std::filesystem::path& path, const SyntheticSpec& spec);

}  // namespace chids::testing
