#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "gestgait/geometry.hpp"
#include "gestgait/landmarks.hpp"

namespace gestgait {

inline constexpr std::size_t kTipPairCount = 10;

/// Slot of the unordered fingertip pair (a, b) in HandMeasurements::tip_distance.
/// Pairs are laid out (thumb,fore), (thumb,middle), ... (ring,pinky).
[[nodiscard]] constexpr std::size_t tip_pair_slot(Finger a, Finger b) noexcept {
  auto i = static_cast<std::size_t>(a);
  auto j = static_cast<std::size_t>(b);
  if (i > j) {
    const std::size_t t = i;
    i = j;
    j = t;
  }
  // Row offsets for i = 0..3 are 0, 4, 7, 9.
  constexpr std::array<std::size_t, 4> kRow{0, 4, 7, 9};
  return kRow[i] + (j - i - 1);
}

/// Everything the rule table looks at, measured once per frame.
struct HandMeasurements {
  std::array<double, kFingerCount> angle_deg{};  // 0 where degenerate
  std::uint8_t degenerate_angles = 0;            // bit f set: finger f angle undefined
  std::array<Membership, kFingerCount> membership{};
  bool hull_degenerate = false;
  std::array<double, kTipPairCount> tip_distance{};

  [[nodiscard]] std::optional<double> angle(Finger f) const noexcept {
    const auto i = static_cast<std::size_t>(f);
    if (degenerate_angles & (1u << i)) return std::nullopt;
    return angle_deg[i];
  }
  [[nodiscard]] bool angles_valid() const noexcept { return degenerate_angles == 0; }
  [[nodiscard]] double distance(Finger a, Finger b) const noexcept {
    return a == b ? 0.0 : tip_distance[tip_pair_slot(a, b)];
  }

  friend bool operator==(const HandMeasurements&, const HandMeasurements&) = default;
};

/// Scalar reference measurement of one frame.
[[nodiscard]] HandMeasurements measure(const HandFrame& frame) noexcept;

enum class KernelKind { Scalar, Avx2 };

[[nodiscard]] std::string_view to_string(KernelKind k) noexcept;
[[nodiscard]] bool kernel_available(KernelKind k) noexcept;

/// Best kernel this CPU supports, unless overridden.
[[nodiscard]] KernelKind active_kernel() noexcept;
void set_kernel_override(std::optional<KernelKind> kind) noexcept;

/// Measures frames[i] into out[i]. Every kernel produces bit-identical output.
/// Requires out.size() >= frames.size().
void measure_batch(std::span<const HandFrame> frames, std::span<HandMeasurements> out);
void measure_batch(std::span<const HandFrame> frames, std::span<HandMeasurements> out,
                   KernelKind kind);

}  // namespace gestgait
