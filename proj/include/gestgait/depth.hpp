#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

#include "gestgait/landmarks.hpp"

namespace gestgait {

struct CameraModel {
  double focal_length_px = 0.0;
};

enum class Gender { Male, Female, Unspecified };

[[nodiscard]] std::string_view to_string(Gender g) noexcept;
[[nodiscard]] std::optional<Gender> gender_from_string(std::string_view s) noexcept;

/// Illustrative palm widths (cm) by gender and standing height. These are
/// placeholder values, not anthropometric reference data; calibrate with
/// palm_width_cm in production.
[[nodiscard]] double lookup_palm_width_cm(Gender gender, double height_cm) noexcept;

/// The user's real-world anchor size: the span between keypoints 5 and 17,
/// taken as three quarters of the palm width.
struct AnchorProfile {
  Gender gender = Gender::Unspecified;
  double height_cm = 170.0;
  std::optional<double> palm_width_override_cm;

  [[nodiscard]] double palm_width_cm() const noexcept {
    return palm_width_override_cm ? *palm_width_override_cm : lookup_palm_width_cm(gender, height_cm);
  }
  [[nodiscard]] double anchor_cm() const noexcept { return 0.75 * palm_width_cm(); }
};

struct DepthEstimate {
  double depth_cm = 0.0;
  double anchor_px = 0.0;  // pixel distance between keypoints 5 and 17
};

/// Pinhole depth from the palm anchor: D = f * H / h. Empty when h is zero.
[[nodiscard]] std::optional<DepthEstimate> estimate_depth(double anchor_px, const CameraModel& camera,
                                                          double anchor_cm) noexcept;
[[nodiscard]] std::optional<DepthEstimate> estimate_depth(const HandFrame& frame,
                                                          const CameraModel& camera,
                                                          const AnchorProfile& profile) noexcept;

enum class ButtonState { Released, Pressed };
enum class ButtonEdge { None, PressEdge, ReleaseEdge };

[[nodiscard]] std::string_view to_string(ButtonState s) noexcept;
[[nodiscard]] std::string_view to_string(ButtonEdge e) noexcept;

inline constexpr double kDefaultDepthThresholdCm = 20.0;

/// Screen-space virtual button. Pressed while the hand is nearer than the
/// depth threshold and the hand bounding box covers the button center.
class VirtualButton {
 public:
  VirtualButton() = default;
  VirtualButton(Keypoint center, double half_extent_px,
                double depth_threshold_cm = kDefaultDepthThresholdCm);

  /// Evaluates one frame and reports the transition from the previous state.
  ButtonEdge update(const HandFrame& frame, const std::optional<DepthEstimate>& depth) noexcept;

  /// Forces Released (no hand in view, stream reset). Returns the edge.
  ButtonEdge release() noexcept;

  [[nodiscard]] ButtonState state() const noexcept { return state_; }
  [[nodiscard]] bool pressed() const noexcept { return state_ == ButtonState::Pressed; }
  [[nodiscard]] Keypoint center() const noexcept { return center_; }
  [[nodiscard]] double half_extent_px() const noexcept { return half_extent_px_; }
  [[nodiscard]] double depth_threshold_cm() const noexcept { return depth_threshold_cm_; }

 private:
  Keypoint center_{640.0, 360.0};
  double half_extent_px_ = 40.0;
  double depth_threshold_cm_ = kDefaultDepthThresholdCm;
  ButtonState state_ = ButtonState::Released;
};

}  // namespace gestgait
