#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "gestgait/depth.hpp"
#include "gestgait/gestures.hpp"

namespace gestgait {

/// Number of identical consecutive labels needed before a gesture is stable.
inline constexpr std::size_t kDebounceWindow = 3;

struct GaitCommand {
  GestureLabel source_gesture = GestureLabel::Unrecognized;
  std::int64_t issued_at_ms = 0;

  friend bool operator==(const GaitCommand&, const GaitCommand&) = default;
};

struct EStopCommand {
  std::int64_t issued_at_ms = 0;
};

struct PipelineConfig {
  // Frames further apart than this reset the debounce window and the latch.
  std::int64_t gap_reset_ms = 500;
};

/// Debounce window plus press/release latch.
///
/// A gesture becomes stable after kDebounceWindow identical defined labels in
/// a row. The stable gesture at the press edge is latched; the release edge
/// turns the latch into a GaitCommand.
class CommandPipeline {
 public:
  CommandPipeline() = default;
  explicit CommandPipeline(PipelineConfig config) : config_(config) {}

  /// Feeds one frame's label and button edge, in frame order.
  std::optional<GaitCommand> step(GestureLabel label, ButtonEdge edge, std::int64_t timestamp_ms);

  /// Bypasses debounce and latch; always returns a command.
  EStopCommand emergency_stop(std::int64_t timestamp_ms);

  void reset();

  [[nodiscard]] std::optional<GestureLabel> stable_label() const noexcept;
  [[nodiscard]] std::optional<GestureLabel> latched() const noexcept { return latched_; }

 private:
  PipelineConfig config_;
  std::array<GestureLabel, kDebounceWindow> window_{};
  std::size_t filled_ = 0;
  std::size_t head_ = 0;
  std::optional<std::int64_t> last_timestamp_;
  std::optional<GestureLabel> latched_;
};

}  // namespace gestgait
