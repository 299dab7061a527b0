#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace chids {

/// The five KDD traffic categories. The enumerator order is the fixed
/// tie-breaking order used throughout the learners.
enum class AttackClass : std::uint8_t { Normal = 0, DoS, Probe, R2L, U2R };

inline constexpr std::size_t kNumClasses = 5;

inline constexpr std::array<AttackClass, kNumClasses> kAllClasses = {
    AttackClass::Normal, AttackClass::DoS, AttackClass::Probe, AttackClass::R2L,
    AttackClass::U2R};

using ClassCounts = std::array<std::size_t, kNumClasses>;

constexpr std::size_t index_of(AttackClass c) noexcept {
  return static_cast<std::size_t>(c);
}

constexpr AttackClass class_at(std::size_t i) noexcept {
  return static_cast<AttackClass>(i);
}

constexpr bool is_attack(AttackClass c) noexcept {
  return c != AttackClass::Normal;
}

std::string_view to_string(AttackClass c) noexcept;

/// Accepts the canonical names ("Normal", "DoS", ...) case-insensitively.
std::optional<AttackClass> parse_attack_class(std::string_view name) noexcept;

}  // namespace chids
