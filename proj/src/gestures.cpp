#include "gestgait/gestures.hpp"

namespace gestgait {

std::string_view to_string(GestureLabel g) noexcept {
  switch (g) {
    case GestureLabel::G0: return "G0";
    case GestureLabel::G1: return "G1";
    case GestureLabel::G2: return "G2";
    case GestureLabel::G3: return "G3";
    case GestureLabel::G4: return "G4";
    case GestureLabel::G5: return "G5";
    case GestureLabel::G6: return "G6";
    case GestureLabel::G7: return "G7";
    case GestureLabel::G8: return "G8";
    case GestureLabel::G9: return "G9";
    case GestureLabel::Love: return "Love";
    case GestureLabel::Rock: return "Rock";
    case GestureLabel::Unrecognized: return "Unrecognized";
  }
  return "Unrecognized";
}

std::optional<GestureLabel> gesture_from_string(std::string_view s) noexcept {
  for (GestureLabel g : kDefinedGestures) {
    if (to_string(g) == s) return g;
  }
  if (s == "Unrecognized") return GestureLabel::Unrecognized;
  return std::nullopt;
}

std::string_view gait_meaning(GestureLabel g) noexcept {
  switch (g) {
    case GestureLabel::G0: return "initialize: power on and stand";
    case GestureLabel::G1: return "step-by-step: initial right step";
    case GestureLabel::G2: return "step-by-step: left leg forward";
    case GestureLabel::G3: return "step-by-step: right leg forward";
    case GestureLabel::G4: return "step-by-step: retract to standing";
    case GestureLabel::G5: return "continuous walking, left leg first";
    case GestureLabel::G6: return "continuous walking: return to standing";
    case GestureLabel::G7: return "stair ascent";
    case GestureLabel::G8: return "stair descent";
    case GestureLabel::G9: return "obstacle crossing";
    case GestureLabel::Love: return "sit down";
    case GestureLabel::Rock: return "stand up";
    case GestureLabel::Unrecognized: return "none";
  }
  return "none";
}

}  // namespace gestgait
