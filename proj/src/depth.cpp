#include "gestgait/depth.hpp"

#include <cmath>

#include "gestgait/geometry.hpp"

namespace gestgait {

std::string_view to_string(Gender g) noexcept {
  switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    case Gender::Unspecified: return "unspecified";
  }
  return "unspecified";
}

std::optional<Gender> gender_from_string(std::string_view s) noexcept {
  for (Gender g : {Gender::Male, Gender::Female, Gender::Unspecified}) {
    if (to_string(g) == s) return g;
  }
  return std::nullopt;
}

double lookup_palm_width_cm(Gender gender, double height_cm) noexcept {
  // Placeholder bands; see header.
  switch (gender) {
    case Gender::Male:
      if (height_cm < 165.0) return 8.2;
      if (height_cm < 175.0) return 8.6;
      return 9.0;
    case Gender::Female:
      if (height_cm < 155.0) return 7.4;
      if (height_cm < 165.0) return 7.8;
      return 8.2;
    case Gender::Unspecified:
      break;
  }
  if (height_cm < 160.0) return 7.8;
  if (height_cm < 175.0) return 8.2;
  return 8.6;
}

std::optional<DepthEstimate> estimate_depth(double anchor_px, const CameraModel& camera,
                                            double anchor_cm) noexcept {
  if (!(anchor_px > 0.0) || !std::isfinite(anchor_px)) return std::nullopt;
  return DepthEstimate{camera.focal_length_px * anchor_cm / anchor_px, anchor_px};
}

std::optional<DepthEstimate> estimate_depth(const HandFrame& frame, const CameraModel& camera,
                                            const AnchorProfile& profile) noexcept {
  return estimate_depth(pixel_distance(frame, kp::kIndexMcp, kp::kPinkyMcp), camera,
                        profile.anchor_cm());
}

std::string_view to_string(ButtonState s) noexcept {
  return s == ButtonState::Pressed ? "pressed" : "released";
}

std::string_view to_string(ButtonEdge e) noexcept {
  switch (e) {
    case ButtonEdge::None: return "none";
    case ButtonEdge::PressEdge: return "press";
    case ButtonEdge::ReleaseEdge: return "release";
  }
  return "none";
}

VirtualButton::VirtualButton(Keypoint center, double half_extent_px, double depth_threshold_cm)
    : center_(center), half_extent_px_(half_extent_px), depth_threshold_cm_(depth_threshold_cm) {}

ButtonEdge VirtualButton::update(const HandFrame& frame,
                                 const std::optional<DepthEstimate>& depth) noexcept {
  const bool press = depth && depth->depth_cm < depth_threshold_cm_ && frame.bbox.contains(center_);
  const ButtonState next = press ? ButtonState::Pressed : ButtonState::Released;
  if (next == state_) return ButtonEdge::None;
  state_ = next;
  return press ? ButtonEdge::PressEdge : ButtonEdge::ReleaseEdge;
}

ButtonEdge VirtualButton::release() noexcept {
  if (state_ == ButtonState::Released) return ButtonEdge::None;
  state_ = ButtonState::Released;
  return ButtonEdge::ReleaseEdge;
}

}  // namespace gestgait
