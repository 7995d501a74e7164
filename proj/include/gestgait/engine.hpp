#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gestgait/config.hpp"
#include "gestgait/depth.hpp"
#include "gestgait/exo_sim.hpp"
#include "gestgait/gait_fsm.hpp"
#include "gestgait/pipeline.hpp"
#include "gestgait/rules.hpp"
#include "gestgait/trace.hpp"

namespace gestgait {

struct CommandOutcome {
  GaitCommand command;
  ApplyResult result;
};

/// Everything one frame produced.
struct FrameResult {
  std::int64_t t_ms = 0;
  GestureLabel label = GestureLabel::Unrecognized;
  std::optional<GestureLabel> stable;
  std::optional<DepthEstimate> depth;
  ButtonState button = ButtonState::Released;
  ButtonEdge edge = ButtonEdge::None;
  std::optional<CommandOutcome> command;
  // The command started a trajectory; its Started sample is the last entry of `sim`.
  bool command_started = false;
  // Started / Completed / Aborted since the previous frame, this frame's start included.
  std::vector<SimSample> sim;
  FsmSnapshot fsm;
  JointPose pose;
  std::optional<std::string> error;  // malformed input; the frame was skipped
};

struct EStopResult {
  // Lifecycle samples due before the stop, then Aborted if a run was active.
  std::vector<SimSample> sim;
  bool aborted = false;
  FsmSnapshot fsm;
  JointPose pose;
};

/// The full per-frame control chain:
/// augment, classify, depth, button, debounce/latch, FSM, simulator.
///
/// Two clocks: frame timestamps drive the debounce window; `now_ms` drives
/// the FSM and the simulator. Replay passes the frame timestamp for both.
class Engine {
 public:
  Engine(const EngineConfig& config, CameraModel camera, AnchorProfile profile, TraceHeader stream);

  FrameResult process(const TraceFrame& frame, double now_ms);
  FrameResult process(const TraceFrame& frame) {
    return process(frame, static_cast<double>(frame.t_ms));
  }

  /// Advances the simulator. Returns every sample, Progress included;
  /// completed trajectories advance the FSM and start follow-up phases.
  std::vector<SimSample> tick(double now_ms);

  EStopResult estop(double now_ms);

  /// New input stream (controller change): resets button, debounce and
  /// latch. FSM and simulator carry on.
  void begin_stream(CameraModel camera, AnchorProfile profile, TraceHeader stream);

  /// Runs the in-flight trajectory to its end. Follow-up phases that this
  /// starts (continuous walking) are reported but not run.
  std::vector<SimSample> drain();

  [[nodiscard]] FsmSnapshot fsm() const noexcept { return fsm_.snapshot(); }
  [[nodiscard]] const JointPose& pose() const noexcept { return sim_.pose(); }
  [[nodiscard]] bool sim_active() const noexcept { return sim_.active(); }
  [[nodiscard]] const TraceHeader& stream() const noexcept { return stream_; }
  [[nodiscard]] std::optional<GestureLabel> stable_label() const noexcept {
    return pipeline_.stable_label();
  }

 private:
  CommandOutcome dispatch(const GaitCommand& cmd, double now_ms, FrameResult& r);

  const RuleTable& rules_;
  AugmentOptions augment_;
  CameraModel camera_;
  AnchorProfile profile_;
  TraceHeader stream_;
  ButtonConfig button_config_;
  VirtualButton button_;
  CommandPipeline pipeline_;
  GaitFsm fsm_;
  ExoSimulator sim_;
};

/// Camera and user for a stream: trace header values win over the config.
/// Throws ConfigError when neither gives a focal length.
[[nodiscard]] CameraModel resolve_camera(const EngineConfig& config, const TraceHeader& header);
[[nodiscard]] AnchorProfile resolve_profile(const EngineConfig& config, const TraceHeader& header);

[[nodiscard]] bool is_lifecycle(const SimSample& s) noexcept;

/// One events-log line.
[[nodiscard]] std::string frame_result_json(const FrameResult& r);

struct ReplaySummary {
  std::size_t frames = 0;
  std::size_t commands = 0;
  std::size_t accepted = 0;
  std::size_t errors = 0;
  FsmSnapshot final_fsm;
};

/// Deterministic offline run on a virtual clock. Writes one JSON line per
/// frame and a closing "end" line once the in-flight trajectory finishes.
ReplaySummary replay(const Trace& trace, const EngineConfig& config, std::ostream& events);

}  // namespace gestgait
