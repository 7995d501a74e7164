#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gestgait/gait_fsm.hpp"

namespace gestgait {

/// Hip and knee flexion in degrees.
struct JointPose {
  double hip_left = 0.0;
  double knee_left = 0.0;
  double hip_right = 0.0;
  double knee_right = 0.0;

  friend bool operator==(const JointPose&, const JointPose&) = default;
};

struct JointLimits {
  double hip_min = -20.0;
  double hip_max = 100.0;
  double knee_min = 0.0;
  double knee_max = 100.0;

  [[nodiscard]] bool contains(const JointPose& p) const noexcept;
};

struct Keyframe {
  double phase = 0.0;  // [0, 1]
  JointPose pose;
};

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GaitProfile {
  std::string name;
  std::vector<Keyframe> keyframes;
  std::int64_t duration_ms = 2000;

  /// Cosine interpolation between the bracketing keyframes.
  [[nodiscard]] JointPose sample(double phase) const noexcept;

  /// Throws ProfileError: phases must strictly increase from 0 to 1, the
  /// duration must be positive and every keyframe within `limits`.
  void validate(const JointLimits& limits) const;
};

/// Named gait profiles, one per FSM action.
class ProfileLibrary {
 public:
  ProfileLibrary() = default;
  explicit ProfileLibrary(std::vector<GaitProfile> profiles, const JointLimits& limits = {});

  /// Built-in illustrative trajectories; same content as config/gait_profiles.json.
  [[nodiscard]] static ProfileLibrary defaults();
  [[nodiscard]] static ProfileLibrary from_json(std::string_view text,
                                                const JointLimits& limits = {});
  [[nodiscard]] std::string to_json() const;

  [[nodiscard]] const GaitProfile& at(const std::string& name) const;
  [[nodiscard]] bool contains(const std::string& name) const { return profiles_.count(name) > 0; }
  [[nodiscard]] std::size_t size() const noexcept { return profiles_.size(); }

 private:
  std::map<std::string, GaitProfile> profiles_;
};

/// Profile that moves the exoskeleton from `from` into `to`.
[[nodiscard]] std::string profile_name_for(GaitState from, GaitState to);

enum class GaitEventKind { Started, Progress, Completed, Aborted };

[[nodiscard]] std::string_view to_string(GaitEventKind k) noexcept;

struct GaitEvent {
  GaitEventKind kind = GaitEventKind::Started;
  std::string profile;
  double fraction = 0.0;

  friend bool operator==(const GaitEvent&, const GaitEvent&) = default;
};

struct SimSample {
  double t_ms = 0.0;  // relative to execution start for Execution, absolute for ExoSimulator
  JointPose pose;
  GaitEvent event;

  friend bool operator==(const SimSample&, const SimSample&) = default;
};

/// One run of a profile at a fixed tick rate: Started at t = 0, Progress at
/// every tick, Completed exactly at the duration, or Aborted.
class Execution {
 public:
  Execution(const GaitProfile& profile, double tick_rate_hz);

  [[nodiscard]] const SimSample& started() const noexcept { return started_; }

  /// Next sample after Started; empty once Completed or Aborted was emitted.
  std::optional<SimSample> next();
  /// Time of the sample next() would return.
  [[nodiscard]] std::optional<double> peek_time() const noexcept;

  /// Aborted at the last emitted pose; empty if the run already ended.
  std::optional<SimSample> abort();

  [[nodiscard]] bool finished() const noexcept { return finished_; }
  /// Samples in a complete run, both endpoints included.
  [[nodiscard]] std::size_t sample_count() const noexcept { return intervals_ + 1; }
  [[nodiscard]] const JointPose& last_pose() const noexcept { return last_pose_; }
  [[nodiscard]] const GaitProfile& profile() const noexcept { return profile_; }

 private:
  [[nodiscard]] double time_of(std::size_t k) const noexcept;

  GaitProfile profile_;
  double tick_rate_hz_;
  std::size_t intervals_;
  std::size_t next_index_ = 1;
  bool finished_ = false;
  JointPose last_pose_;
  SimSample started_;
};

/// Full sample stream of an uninterrupted run.
[[nodiscard]] std::vector<SimSample> execute(const GaitProfile& profile, double tick_rate_hz);

/// Simulated exoskeleton driven by an external clock (virtual in replay,
/// wall time in the live service). Runs one execution at a time.
class ExoSimulator {
 public:
  explicit ExoSimulator(ProfileLibrary profiles = ProfileLibrary::defaults(),
                        double tick_rate_hz = 100.0);

  /// Starts a profile; throws std::logic_error while another one is active.
  SimSample start(const std::string& profile, double now_ms);

  /// Emits every sample due at or before now_ms. Stops after Completed.
  std::vector<SimSample> advance_to(double now_ms);

  /// Aborts the active execution; empty (no-op) when idle.
  std::optional<SimSample> abort(double now_ms);

  [[nodiscard]] bool active() const noexcept { return run_.has_value(); }
  [[nodiscard]] const JointPose& pose() const noexcept { return pose_; }
  [[nodiscard]] double tick_rate_hz() const noexcept { return tick_rate_hz_; }
  [[nodiscard]] const ProfileLibrary& profiles() const noexcept { return profiles_; }
  /// Absolute time the active run completes.
  [[nodiscard]] std::optional<double> completion_time() const noexcept;

 private:
  ProfileLibrary profiles_;
  double tick_rate_hz_;
  std::optional<Execution> run_;
  double run_start_ms_ = 0.0;
  JointPose pose_;
};

}  // namespace gestgait
