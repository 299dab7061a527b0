#include "chids/attack_class.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace chids {

std::string_view to_string(AttackClass c) noexcept {
  switch (c) {
    case AttackClass::Normal: return "Normal";
    case AttackClass::DoS: return "DoS";
    case AttackClass::Probe: return "Probe";
    case AttackClass::R2L: return "R2L";
    case AttackClass::U2R: return "U2R";
  }
  return "?";
}

std::optional<AttackClass> parse_attack_class(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  for (AttackClass c : kAllClasses) {
    std::string canon(to_string(c));
    std::transform(canon.begin(), canon.end(), canon.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (canon == lower) return c;
  }
  return std::nullopt;
}

}  // namespace chids
