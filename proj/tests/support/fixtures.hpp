#pragma once

// Synthetic right-hand landmark fixtures, 1280x720, palm facing the camera.

#include <array>
#include <cstdint>
#include <string_view>

#include "gestgait/gestures.hpp"
#include "gestgait/landmarks.hpp"
#include "gestgait/trace.hpp"

namespace fixtures {

using gestgait::FrameSize;
using gestgait::GestureLabel;
using gestgait::HandFrame;
using gestgait::Keypoint;

inline constexpr FrameSize kFrame{1280.0, 720.0};

// Which of the two directions at the requested angle the fingertip takes.
// Plus rotates the pivot-to-proximal ray by +angle in (u, v) coordinates.
// Auto: toward the palm when bent (< 90 deg), away from it otherwise.
enum class Side { Auto, Plus, Minus };

struct FingerSpec {
  double angle_deg = 40.0;
  double length_px = 100.0;
  Side side = Side::Auto;
};

// Thumb, forefinger, middle, ring, pinky.
using HandSpec = std::array<FingerSpec, 5>;

/// Palm keypoints shared by every fixture: 0, 1, 2, 3, 5, 6, 9, 10, 13, 14, 17, 18.
std::array<Keypoint, 21> palm();

/// Places each fingertip so its joint angle equals the spec (up to rounding)
/// and fills the intermediate joints.
std::array<Keypoint, 21> landmarks(const HandSpec& spec);
std::array<Keypoint, 21> landmarks(const HandSpec& spec, const std::array<Keypoint, 21>& base);

/// Palm with the finger PIP joints folded down, as in a fist.
std::array<Keypoint, 21> fist_palm();

HandFrame build(const HandSpec& spec, std::int64_t t_ms = 0, FrameSize size = kFrame);
HandFrame build(const std::array<Keypoint, 21>& raw, std::int64_t t_ms = 0, FrameSize size = kFrame);

/// Spec of the fixture for a defined gesture. G0 is drawn on fist_palm().
HandSpec gesture_spec(GestureLabel g);
std::array<Keypoint, 21> gesture_landmarks(GestureLabel g);
HandFrame gesture(GestureLabel g, std::int64_t t_ms = 0);

enum class Confusable { TigerClaw, Good, Ok, NaturallyOpen, Gun };
inline constexpr std::array<Confusable, 5> kConfusables{
    Confusable::TigerClaw, Confusable::Good, Confusable::Ok, Confusable::NaturallyOpen,
    Confusable::Gun};

std::string_view name(Confusable c);
std::array<Keypoint, 21> confusable_landmarks(Confusable c);
HandFrame confusable(Confusable c, std::int64_t t_ms = 0);

/// Raw detector landmarks of a fixture as a trace frame.
gestgait::TraceFrame trace_frame(const std::array<Keypoint, 21>& raw, std::int64_t t_ms,
                                 double conf = 0.95);

/// Same hand scaled about the wrist so the 5-17 span becomes `anchor_px`.
std::array<Keypoint, 21> scaled_to_anchor(const std::array<Keypoint, 21>& raw, double anchor_px);

/// Same hand translated so that keypoint 21 (palm anchor) sits at `target`.
std::array<Keypoint, 21> centered_on(const std::array<Keypoint, 21>& raw, Keypoint target);

gestgait::TraceHeader header(double focal_length_px = 1000.0);

}  // namespace fixtures
