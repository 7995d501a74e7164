#include "gestgait/pipeline.hpp"

#include <algorithm>

namespace gestgait {

std::optional<GaitCommand> CommandPipeline::step(GestureLabel label, ButtonEdge edge,
                                                 std::int64_t timestamp_ms) {
  if (last_timestamp_ && timestamp_ms - *last_timestamp_ > config_.gap_reset_ms) {
    reset();
  }
  last_timestamp_ = timestamp_ms;

  window_[head_] = label;
  head_ = (head_ + 1) % kDebounceWindow;
  filled_ = std::min(filled_ + 1, kDebounceWindow);

  switch (edge) {
    case ButtonEdge::PressEdge:
      latched_ = stable_label();
      break;
    case ButtonEdge::ReleaseEdge:
      if (latched_) {
        const GaitCommand cmd{*latched_, timestamp_ms};
        latched_.reset();
        return cmd;
      }
      break;
    case ButtonEdge::None:
      break;
  }
  return std::nullopt;
}

EStopCommand CommandPipeline::emergency_stop(std::int64_t timestamp_ms) {
  latched_.reset();
  filled_ = 0;
  head_ = 0;
  return EStopCommand{timestamp_ms};
}

void CommandPipeline::reset() {
  filled_ = 0;
  head_ = 0;
  latched_.reset();
  last_timestamp_.reset();
}

std::optional<GestureLabel> CommandPipeline::stable_label() const noexcept {
  if (filled_ < kDebounceWindow) return std::nullopt;
  const GestureLabel first = window_[0];
  if (!is_defined(first)) return std::nullopt;
  for (GestureLabel g : window_) {
    if (g != first) return std::nullopt;
  }
  return first;
}

}  // namespace gestgait
