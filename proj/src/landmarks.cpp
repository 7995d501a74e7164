#include "gestgait/landmarks.hpp"

#include <algorithm>
#include <cmath>

namespace gestgait {

HandFrame augment(std::span<const Keypoint> raw, std::int64_t timestamp_ms, FrameSize size,
                  double confidence, const AugmentOptions& options) {
  if (raw.size() != kLandmarkCount) {
    throw MalformedFrame("expected 21 landmarks, got " + std::to_string(raw.size()));
  }
  if (!(std::isfinite(size.width) && std::isfinite(size.height)) || size.width <= 0.0 ||
      size.height <= 0.0) {
    throw MalformedFrame("frame dimensions must be positive");
  }
  if (!std::isfinite(confidence)) {
    throw MalformedFrame("non-finite detection confidence");
  }

  HandFrame frame;
  frame.timestamp_ms = timestamp_ms;
  frame.frame_width = size.width;
  frame.frame_height = size.height;
  frame.detection_confidence = std::clamp(confidence, 0.0, 1.0);

  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    const Keypoint& p = raw[i];
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) {
      throw MalformedFrame("non-finite coordinate at landmark " + std::to_string(i));
    }
    double u = std::clamp(p.u, 0.0, size.width);
    if (options.mirror_u) {
      u = size.width - u;
    }
    frame.points[i] = {u, std::clamp(p.v, 0.0, size.height)};
  }

  const Keypoint& a = frame.points[kp::kIndexMcp];
  const Keypoint& b = frame.points[kp::kPinkyMcp];
  frame.points[kp::kPalmAnchor] = {(a.u + b.u) / 2.0, (a.v + b.v) / 2.0};

  BoundingBox box{frame.points[0].u, frame.points[0].v, frame.points[0].u, frame.points[0].v};
  for (const Keypoint& p : frame.points) {
    box.u_min = std::min(box.u_min, p.u);
    box.v_min = std::min(box.v_min, p.v);
    box.u_max = std::max(box.u_max, p.u);
    box.v_max = std::max(box.v_max, p.v);
  }
  frame.bbox = box;
  return frame;
}

Keypoint to_pixels(Keypoint normalized, FrameSize size) noexcept {
  return {normalized.u * size.width, normalized.v * size.height};
}

}  // namespace gestgait
