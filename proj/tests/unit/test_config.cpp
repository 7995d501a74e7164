#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "gestgait/config.hpp"

using namespace gestgait;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gestgait_config_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

struct EnvGuard {
  EnvGuard(const char* value) {
    if (value) {
      ::setenv("GESTGAIT_CONFIG", value, 1);
    } else {
      ::unsetenv("GESTGAIT_CONFIG");
    }
  }
  ~EnvGuard() { ::unsetenv("GESTGAIT_CONFIG"); }
};

}  // namespace

TEST_CASE("defaults") {
  const EngineConfig c = parse_config("{}");
  CHECK_FALSE(c.focal_length_px.has_value());
  CHECK(c.button.center == Keypoint{640, 360});
  CHECK(c.button.half_extent_px == 40.0);
  CHECK(c.button.depth_threshold_cm == 20.0);
  CHECK(c.pipeline.gap_reset_ms == 500);
  CHECK(c.tick_rate_hz == 100.0);
  CHECK(c.bind_address == "127.0.0.1");
  CHECK_FALSE(c.augment.mirror_u);
  CHECK(c.profiles.size() == ProfileLibrary::defaults().size());
}

TEST_CASE("every key is read") {
  TempDir dir;
  dir.write("p.json", ProfileLibrary::defaults().to_json());
  const EngineConfig c = parse_config(R"({
    "camera": {"focal_length_px": 812.5},
    "user": {"gender": "female", "height_cm": 158, "palm_width_cm": 7.1},
    "button": {"center_uv": [320, 240], "half_extent_px": 25, "depth_threshold_cm": 18},
    "rules": {"mirror_u": true},
    "pipeline": {"gap_reset_ms": 250},
    "sim": {"tick_rate_hz": 50, "profiles": "p.json"},
    "service": {"bind_address": "0.0.0.0"}
  })",
                                      dir.path.string());
  CHECK(c.focal_length_px == 812.5);
  CHECK(c.user.gender == Gender::Female);
  CHECK(c.user.height_cm == 158.0);
  CHECK(c.user.palm_width_override_cm == 7.1);
  CHECK(c.button.center == Keypoint{320, 240});
  CHECK(c.button.half_extent_px == 25.0);
  CHECK(c.button.depth_threshold_cm == 18.0);
  CHECK(c.augment.mirror_u);
  CHECK(c.pipeline.gap_reset_ms == 250);
  CHECK(c.tick_rate_hz == 50.0);
  CHECK(c.bind_address == "0.0.0.0");
}

TEST_CASE("invalid configs") {
  CHECK_THROWS_AS((void)parse_config("nope"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[]"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"camera": 3})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"camera": {"focal_length_px": -1}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"camera": {"focal_length_px": "big"}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"button": {"center_uv": [1]}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"user": {"gender": "other"}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"rules": {"mirror_u": "yes"}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"sim": {"tick_rate_hz": 0}})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"sim": {"profiles": "missing.json"}})", "/nonexistent"),
                  ConfigError);
  CHECK_THROWS_AS((void)load_config("/nonexistent/gestgait.json"), ConfigError);
}

TEST_CASE("shipped sample config loads") {
  const EngineConfig c = load_config(std::string(GESTGAIT_SOURCE_DIR) + "/config/gestgait.json");
  CHECK(c.focal_length_px == 1000.0);
  CHECK(c.profiles.contains("power_on"));
}

TEST_CASE("profile paths resolve against the config file") {
  TempDir dir;
  fs::create_directories(dir.path / "sub");
  dir.write("sub/profiles.json", ProfileLibrary::defaults().to_json());
  const std::string cfg = dir.write("sub/c.json", R"({"sim": {"profiles": "profiles.json"}})");
  CHECK_NOTHROW((void)load_config(cfg));
}

TEST_CASE("GESTGAIT_CONFIG is the fallback path") {
  TempDir dir;
  const std::string a = dir.write("a.json", R"({"camera": {"focal_length_px": 111}})");
  const std::string b = dir.write("b.json", R"({"camera": {"focal_length_px": 222}})");
  {
    EnvGuard env(nullptr);
    CHECK_FALSE(resolve_config_path(std::nullopt).has_value());
    CHECK_FALSE(load_config_or_default(std::nullopt).focal_length_px.has_value());
  }
  {
    EnvGuard env(b.c_str());
    CHECK(resolve_config_path(std::nullopt) == b);
    CHECK(load_config_or_default(std::nullopt).focal_length_px == 222.0);
    // An explicit path wins.
    CHECK(resolve_config_path(a) == a);
    CHECK(load_config_or_default(a).focal_length_px == 111.0);
    CHECK(resolve_config_path(std::string()) == b);
  }
  {
    EnvGuard env("");
    CHECK_FALSE(resolve_config_path(std::nullopt).has_value());
  }
}
