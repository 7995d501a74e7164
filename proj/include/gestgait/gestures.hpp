#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace gestgait {

/// The twelve control gestures, plus Unrecognized for everything else.
enum class GestureLabel {
  G0,
  G1,
  G2,
  G3,
  G4,
  G5,
  G6,
  G7,
  G8,
  G9,
  Love,
  Rock,
  Unrecognized,
};

inline constexpr std::size_t kDefinedGestureCount = 12;

inline constexpr std::array<GestureLabel, kDefinedGestureCount> kDefinedGestures{
    GestureLabel::G0, GestureLabel::G1, GestureLabel::G2, GestureLabel::G3,
    GestureLabel::G4, GestureLabel::G5, GestureLabel::G6, GestureLabel::G7,
    GestureLabel::G8, GestureLabel::G9, GestureLabel::Love, GestureLabel::Rock};

[[nodiscard]] constexpr bool is_defined(GestureLabel g) noexcept {
  return g != GestureLabel::Unrecognized;
}

[[nodiscard]] std::string_view to_string(GestureLabel g) noexcept;
[[nodiscard]] std::optional<GestureLabel> gesture_from_string(std::string_view s) noexcept;

/// Human-readable gait action a gesture commands.
[[nodiscard]] std::string_view gait_meaning(GestureLabel g) noexcept;

}  // namespace gestgait
