#include "gestgait/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gestgait {

std::string_view to_string(Finger f) noexcept {
  switch (f) {
    case Finger::Thumb: return "thumb";
    case Finger::Forefinger: return "forefinger";
    case Finger::Middle: return "middle";
    case Finger::Ring: return "ring";
    case Finger::Pinky: return "pinky";
  }
  return "?";
}

std::optional<Finger> finger_from_string(std::string_view s) noexcept {
  for (Finger f : kFingers) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::optional<Finger> finger_of_tip(std::size_t keypoint) noexcept {
  for (std::size_t i = 0; i < kFingerCount; ++i) {
    if (kFingertips[i] == keypoint) return kFingers[i];
  }
  return std::nullopt;
}

std::string_view to_string(Membership m) noexcept {
  switch (m) {
    case Membership::Inner: return "inner";
    case Membership::Between: return "between";
    case Membership::Outside: return "outside";
  }
  return "?";
}

std::optional<double> joint_angle(Keypoint pivot, Keypoint proximal, Keypoint distal) noexcept {
  const double x1 = proximal.u - pivot.u;
  const double y1 = proximal.v - pivot.v;
  const double x2 = distal.u - pivot.u;
  const double y2 = distal.v - pivot.v;
  const double n1 = x1 * x1 + y1 * y1;
  const double n2 = x2 * x2 + y2 * y2;
  if (n1 == 0.0 || n2 == 0.0) {
    return std::nullopt;
  }
  const double cross = x1 * y2 - y1 * x2;
  const double dot = x1 * x2 + y1 * y2;
  return std::atan2(std::fabs(cross), dot) * (180.0 / std::numbers::pi);
}

std::optional<double> joint_angle(const HandFrame& frame, Finger finger) noexcept {
  const JointAngleSpec& s = kJointAngleSpecs[static_cast<std::size_t>(finger)];
  return joint_angle(frame.points[s.pivot], frame.points[s.proximal], frame.points[s.distal]);
}

namespace {

// The AVX2 kernel replicates this exact operation order per lane.
template <typename VertexAt>
bool even_odd(std::size_t n, VertexAt vertex, Keypoint p) noexcept {
  bool inside = false;
  bool on_edge = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Keypoint a = vertex(j);
    const Keypoint b = vertex(i);
    const double eu = b.u - a.u;
    const double ev = b.v - a.v;
    const double pu = p.u - a.u;
    const double pv = p.v - a.v;
    const double cross = eu * pv - ev * pu;
    if (cross == 0.0 && std::min(a.u, b.u) <= p.u && p.u <= std::max(a.u, b.u) &&
        std::min(a.v, b.v) <= p.v && p.v <= std::max(a.v, b.v)) {
      on_edge = true;
    }
    if ((a.v > p.v) != (b.v > p.v)) {
      const double x = eu * pv / ev + a.u;
      if (p.u < x) inside = !inside;
    }
  }
  return inside || on_edge;
}

}  // namespace

bool point_in_polygon(std::span<const Keypoint> polygon, Keypoint p) noexcept {
  if (polygon.size() < 3) return false;
  return even_odd(polygon.size(), [&](std::size_t i) { return polygon[i]; }, p);
}

bool point_in_polygon(const HandFrame& frame, std::span<const std::size_t> polygon,
                      Keypoint p) noexcept {
  if (polygon.size() < 3) return false;
  return even_odd(polygon.size(), [&](std::size_t i) { return frame.points[polygon[i]]; }, p);
}

Membership classify_membership(const HandFrame& frame, Keypoint p, bool& degenerate) noexcept {
  const bool in_inner = point_in_polygon(frame, kInnerHull, p);
  const bool in_outer = point_in_polygon(frame, kOuterHull, p);
  if (in_inner && !in_outer) degenerate = true;
  if (in_inner) return Membership::Inner;
  if (in_outer) return Membership::Between;
  return Membership::Outside;
}

HullMembership hull_membership(const HandFrame& frame) noexcept {
  HullMembership out;
  for (std::size_t f = 0; f < kFingerCount; ++f) {
    out.tips[f] = classify_membership(frame, frame.points[kFingertips[f]], out.degenerate);
  }
  return out;
}

std::optional<double> distance_ratio(const HandFrame& frame, KeypointPair numerator,
                                     KeypointPair denominator) noexcept {
  const double den = pixel_distance(frame, denominator.first, denominator.second);
  if (den == 0.0) return std::nullopt;
  return pixel_distance(frame, numerator.first, numerator.second) / den;
}

}  // namespace gestgait
