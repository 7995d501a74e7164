#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace gestgait {

/// One hand landmark in pixel coordinates (u to the right, v down).
struct Keypoint {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// Axis-aligned box in pixel space. Containment is boundary-inclusive.
struct BoundingBox {
  double u_min = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;

  [[nodiscard]] bool contains(const Keypoint& p) const noexcept {
    return u_min <= p.u && p.u <= u_max && v_min <= p.v && p.v <= v_max;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

[[nodiscard]] inline bool bbox_contains(const BoundingBox& b, const Keypoint& p) noexcept {
  return b.contains(p);
}

struct FrameSize {
  double width = 0.0;
  double height = 0.0;
};

// MediaPipe hand skeleton numbering.
namespace kp {
inline constexpr std::size_t kWrist = 0;
inline constexpr std::size_t kThumbTip = 4;
inline constexpr std::size_t kIndexMcp = 5;
inline constexpr std::size_t kIndexTip = 8;
inline constexpr std::size_t kMiddleTip = 12;
inline constexpr std::size_t kRingTip = 16;
inline constexpr std::size_t kPinkyMcp = 17;
inline constexpr std::size_t kPinkyTip = 20;
inline constexpr std::size_t kPalmAnchor = 21;  // virtual, midpoint of 5 and 17
}  // namespace kp

inline constexpr std::size_t kLandmarkCount = 21;
inline constexpr std::size_t kPointCount = 22;

class MalformedFrame : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A validated hand frame: the 21 detector landmarks plus the derived palm
/// anchor (index 21) and the bounding box over all 22 points.
///
/// Standard layout on purpose: the AVX2 measurement kernel gathers
/// coordinates straight out of contiguous arrays of frames.
struct HandFrame {
  std::array<Keypoint, kPointCount> points{};
  BoundingBox bbox{};
  std::int64_t timestamp_ms = 0;
  double frame_width = 0.0;
  double frame_height = 0.0;
  double detection_confidence = 0.0;

  [[nodiscard]] const Keypoint& operator[](std::size_t i) const { return points[i]; }
  [[nodiscard]] const Keypoint& palm_anchor() const { return points[kp::kPalmAnchor]; }
};

struct AugmentOptions {
  // Mirror u for left hands so the right-hand rule table applies.
  bool mirror_u = false;
};

/// Validates raw detector output and derives keypoint 21 and the bbox.
/// Coordinates are clamped into [0, width] x [0, height]; non-finite values
/// or a landmark count other than 21 throw MalformedFrame.
[[nodiscard]] HandFrame augment(std::span<const Keypoint> raw, std::int64_t timestamp_ms,
                                FrameSize size, double confidence,
                                const AugmentOptions& options = {});

/// Converts normalized [0,1] landmark coordinates to pixels.
[[nodiscard]] Keypoint to_pixels(Keypoint normalized, FrameSize size) noexcept;

}  // namespace gestgait
