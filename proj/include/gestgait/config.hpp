#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gestgait/depth.hpp"
#include "gestgait/exo_sim.hpp"
#include "gestgait/landmarks.hpp"
#include "gestgait/pipeline.hpp"

namespace gestgait {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ButtonConfig {
  Keypoint center{640.0, 360.0};
  double half_extent_px = 40.0;
  double depth_threshold_cm = kDefaultDepthThresholdCm;
};

/// Everything the engine needs, from a JSON config file:
///
///   camera.focal_length_px      required unless the trace header has it
///   user.gender / height_cm / palm_width_cm
///   button.center_uv / half_extent_px / depth_threshold_cm
///   rules.mirror_u
///   pipeline.gap_reset_ms
///   sim.tick_rate_hz, sim.profiles (path, relative to the config file)
///   service.bind_address
struct EngineConfig {
  std::optional<double> focal_length_px;
  AnchorProfile user;
  ButtonConfig button;
  AugmentOptions augment;
  PipelineConfig pipeline;
  double tick_rate_hz = 100.0;
  ProfileLibrary profiles = ProfileLibrary::defaults();
  std::string bind_address = "127.0.0.1";
};

/// `base_dir` resolves relative profile paths.
[[nodiscard]] EngineConfig parse_config(std::string_view json_text, const std::string& base_dir = ".");
[[nodiscard]] EngineConfig load_config(const std::string& path);

/// The explicit path if given, else $GESTGAIT_CONFIG, else nothing.
[[nodiscard]] std::optional<std::string> resolve_config_path(const std::optional<std::string>& explicit_path);

/// Loads the resolved config, or defaults when no path resolves.
[[nodiscard]] EngineConfig load_config_or_default(const std::optional<std::string>& explicit_path);

}  // namespace gestgait
