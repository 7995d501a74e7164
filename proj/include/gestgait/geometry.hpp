#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "gestgait/landmarks.hpp"

namespace gestgait {

enum class Finger { Thumb = 0, Forefinger, Middle, Ring, Pinky };

inline constexpr std::size_t kFingerCount = 5;
inline constexpr std::array<Finger, kFingerCount> kFingers{
    Finger::Thumb, Finger::Forefinger, Finger::Middle, Finger::Ring, Finger::Pinky};

/// Fingertip keypoint index per finger, in Finger order.
inline constexpr std::array<std::size_t, kFingerCount> kFingertips{4, 8, 12, 16, 20};

[[nodiscard]] std::string_view to_string(Finger f) noexcept;
[[nodiscard]] std::optional<Finger> finger_from_string(std::string_view s) noexcept;
[[nodiscard]] std::optional<Finger> finger_of_tip(std::size_t keypoint) noexcept;

/// Keypoints forming a finger's flexion angle. The angle is measured at the
/// pivot between the rays toward the proximal and distal keypoints.
struct JointAngleSpec {
  Finger finger;
  std::size_t pivot;
  std::size_t proximal;
  std::size_t distal;
};

inline constexpr std::array<JointAngleSpec, kFingerCount> kJointAngleSpecs{{
    {Finger::Thumb, 2, 0, 4},
    {Finger::Forefinger, 6, 5, 8},
    {Finger::Middle, 10, 9, 12},
    {Finger::Ring, 14, 13, 16},
    {Finger::Pinky, 18, 17, 20},
}};

// Recognition polygons, closed (last vertex joins the first).
inline constexpr std::array<std::size_t, 7> kInnerHull{0, 1, 2, 5, 9, 13, 17};
inline constexpr std::array<std::size_t, 9> kOuterHull{0, 1, 2, 3, 6, 10, 14, 18, 17};

/// Interior angle at `pivot` in degrees, 180 for a straight finger.
/// Empty when either ray has zero length.
///
/// Evaluated as atan2(|v1 x v2|, v1 . v2), the well-conditioned form of
/// arccos(v1 . v2 / (|v1| |v2|)).
[[nodiscard]] std::optional<double> joint_angle(Keypoint pivot, Keypoint proximal,
                                                Keypoint distal) noexcept;
[[nodiscard]] std::optional<double> joint_angle(const HandFrame& frame, Finger finger) noexcept;

/// Even-odd test; points on an edge count as inside.
[[nodiscard]] bool point_in_polygon(std::span<const Keypoint> polygon, Keypoint p) noexcept;
[[nodiscard]] bool point_in_polygon(const HandFrame& frame, std::span<const std::size_t> polygon,
                                    Keypoint p) noexcept;

enum class Membership { Inner, Between, Outside };

[[nodiscard]] std::string_view to_string(Membership m) noexcept;

struct HullMembership {
  std::array<Membership, kFingerCount> tips{};
  // Some fingertip lies in the inner polygon but not in the outer one.
  bool degenerate = false;

  [[nodiscard]] Membership operator[](Finger f) const { return tips[static_cast<std::size_t>(f)]; }
};

/// Classifies one point against both recognition polygons. Sets `degenerate`
/// when the point is inside the inner polygon but outside the outer one.
[[nodiscard]] Membership classify_membership(const HandFrame& frame, Keypoint p,
                                             bool& degenerate) noexcept;
[[nodiscard]] HullMembership hull_membership(const HandFrame& frame) noexcept;

[[nodiscard]] inline double pixel_distance(Keypoint a, Keypoint b) noexcept {
  const double du = b.u - a.u;
  const double dv = b.v - a.v;
  return std::sqrt(du * du + dv * dv);
}

[[nodiscard]] inline double pixel_distance(const HandFrame& frame, std::size_t i,
                                           std::size_t j) noexcept {
  return pixel_distance(frame.points[i], frame.points[j]);
}

using KeypointPair = std::pair<std::size_t, std::size_t>;

/// d(numerator) / d(denominator); empty when the denominator is zero.
[[nodiscard]] std::optional<double> distance_ratio(const HandFrame& frame, KeypointPair numerator,
                                                   KeypointPair denominator) noexcept;

}  // namespace gestgait
