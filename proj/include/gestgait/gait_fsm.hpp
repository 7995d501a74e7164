#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "gestgait/gestures.hpp"
#include "gestgait/pipeline.hpp"

namespace gestgait {

enum class GaitState {
  Unpowered,
  Standing,
  Sitting,
  RightForward,
  LeftForward,
  RightHighStep,
  RightLowStep,
  RightObstacle,
};

inline constexpr std::size_t kGaitStateCount = 8;
inline constexpr std::array<GaitState, kGaitStateCount> kGaitStates{
    GaitState::Unpowered,    GaitState::Standing,      GaitState::Sitting,
    GaitState::RightForward, GaitState::LeftForward,   GaitState::RightHighStep,
    GaitState::RightLowStep, GaitState::RightObstacle};

enum class WalkMode { None, StepByStep, Continuous };

inline constexpr std::array<WalkMode, 3> kWalkModes{WalkMode::None, WalkMode::StepByStep,
                                                    WalkMode::Continuous};

[[nodiscard]] std::string_view to_string(GaitState s) noexcept;
[[nodiscard]] std::string_view to_string(WalkMode m) noexcept;
[[nodiscard]] std::optional<GaitState> gait_state_from_string(std::string_view s) noexcept;

/// A planned motion. Each phase is one trajectory; after the last phase the
/// exoskeleton settles into `settle` without a further trajectory.
struct GaitPlan {
  std::vector<GaitState> phases;
  std::optional<GaitState> settle;

  /// Phases followed by the settle state, e.g. [RightHighStep, Standing].
  [[nodiscard]] std::vector<GaitState> states() const;

  friend bool operator==(const GaitPlan&, const GaitPlan&) = default;
};

enum class RejectReason { Busy, Halted, InvalidTransition };

[[nodiscard]] std::string_view to_string(RejectReason r) noexcept;

struct ApplyResult {
  bool accepted = false;
  GaitPlan plan;                      // when accepted
  RejectReason reason = RejectReason::InvalidTransition;  // when rejected

  [[nodiscard]] static ApplyResult accept(GaitPlan p) { return {true, std::move(p), {}}; }
  [[nodiscard]] static ApplyResult reject(RejectReason r) { return {false, {}, r}; }
};

/// One transition-table entry, keyed by (state, mode, gesture).
struct Transition {
  GaitState from;
  WalkMode mode;
  GestureLabel gesture;
  GaitPlan plan;
  WalkMode next_mode;
};

/// The transitions that gestures trigger. Everything absent is invalid.
[[nodiscard]] const std::vector<Transition>& transition_table();

/// Immutable view of the machine, safe to hand to telemetry.
struct FsmSnapshot {
  GaitState state = GaitState::Unpowered;
  WalkMode mode = WalkMode::None;
  bool executing = false;
  bool halted = false;
  bool stop_pending = false;

  friend bool operator==(const FsmSnapshot&, const FsmSnapshot&) = default;
};

/// Gesture-driven gait state machine with execution lockout and e-stop.
///
/// `state` is the posture the current trajectory moves into (or rests in).
/// While a trajectory executes, every command is rejected as Busy, except
/// the continuous-walk stop gesture, which is queued for the next step
/// boundary. After an e-stop only G0 is accepted; it re-initializes through
/// Unpowered.
class GaitFsm {
 public:
  GaitFsm() = default;

  /// Idle machine resting in (state, mode); used by tests and replay tools.
  [[nodiscard]] static GaitFsm at_rest(GaitState state, WalkMode mode);

  ApplyResult apply(GestureLabel gesture);
  ApplyResult apply(const GaitCommand& command) { return apply(command.source_gesture); }

  /// Current trajectory finished. Returns the new state. Precondition: executing.
  GaitState on_gait_complete();

  void estop() noexcept;

  [[nodiscard]] FsmSnapshot snapshot() const noexcept;
  [[nodiscard]] GaitState state() const noexcept { return state_; }
  [[nodiscard]] WalkMode mode() const noexcept { return mode_; }
  [[nodiscard]] bool executing() const noexcept { return executing_; }
  [[nodiscard]] bool halted() const noexcept { return halted_; }

  /// Phases of the current plan still to start after the running one.
  [[nodiscard]] std::size_t remaining_phases() const noexcept { return remaining_.size(); }

 private:
  void start(const GaitPlan& plan);

  GaitState state_ = GaitState::Unpowered;
  WalkMode mode_ = WalkMode::None;
  bool executing_ = false;
  bool halted_ = false;
  bool stop_pending_ = false;
  std::vector<GaitState> remaining_;
  std::optional<GaitState> settle_;
};

}  // namespace gestgait
