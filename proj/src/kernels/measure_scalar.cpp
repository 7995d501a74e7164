#include "kernels.hpp"

namespace gestgait {

HandMeasurements measure(const HandFrame& frame) noexcept {
  HandMeasurements m;
  for (std::size_t f = 0; f < kFingerCount; ++f) {
    if (const auto a = joint_angle(frame, kFingers[f])) {
      m.angle_deg[f] = *a;
    } else {
      m.degenerate_angles |= static_cast<std::uint8_t>(1u << f);
    }
  }
  const HullMembership hull = hull_membership(frame);
  m.membership = hull.tips;
  m.hull_degenerate = hull.degenerate;
  for (std::size_t i = 0; i < kFingerCount; ++i) {
    for (std::size_t j = i + 1; j < kFingerCount; ++j) {
      m.tip_distance[tip_pair_slot(kFingers[i], kFingers[j])] =
          pixel_distance(frame, kFingertips[i], kFingertips[j]);
    }
  }
  return m;
}

namespace kernels {

void measure_scalar(std::span<const HandFrame> frames, std::span<HandMeasurements> out) noexcept {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out[i] = measure(frames[i]);
  }
}

}  // namespace kernels
}  // namespace gestgait
