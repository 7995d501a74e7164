#include "gestgait/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace gestgait {

using codec::ojson;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number(const ojson& j, const std::string& key) {
  if (!j.is_number() || !std::isfinite(j.get<double>())) throw ConfigError(key + " must be a number");
  return j.get<double>();
}

double positive(const ojson& j, const std::string& key) {
  const double x = number(j, key);
  if (!(x > 0.0)) throw ConfigError(key + " must be positive");
  return x;
}

const ojson* section(const ojson& doc, const char* name) {
  if (!doc.contains(name)) return nullptr;
  const ojson& s = doc[name];
  if (!s.is_object()) throw ConfigError(std::string(name) + " must be an object");
  return &s;
}

}  // namespace

EngineConfig parse_config(std::string_view text, const std::string& base_dir) {
  EngineConfig cfg;
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  try {
    if (const ojson* cam = section(doc, "camera")) {
      if (cam->contains("focal_length_px")) {
        cfg.focal_length_px = positive((*cam)["focal_length_px"], "camera.focal_length_px");
      }
    }
    if (const ojson* user = section(doc, "user")) {
      try {
        cfg.user = codec::profile_from(*user);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("user: ") + e.what());
      }
    }
    if (const ojson* b = section(doc, "button")) {
      if (b->contains("center_uv")) {
        const ojson& c = (*b)["center_uv"];
        if (!c.is_array() || c.size() != 2) throw ConfigError("button.center_uv must be [u, v]");
        cfg.button.center = {number(c[0], "button.center_uv"), number(c[1], "button.center_uv")};
      }
      if (b->contains("half_extent_px")) {
        cfg.button.half_extent_px = positive((*b)["half_extent_px"], "button.half_extent_px");
      }
      if (b->contains("depth_threshold_cm")) {
        cfg.button.depth_threshold_cm =
            positive((*b)["depth_threshold_cm"], "button.depth_threshold_cm");
      }
    }
    if (const ojson* r = section(doc, "rules")) {
      if (r->contains("mirror_u")) cfg.augment.mirror_u = (*r)["mirror_u"].get<bool>();
    }
    if (const ojson* p = section(doc, "pipeline")) {
      if (p->contains("gap_reset_ms")) {
        cfg.pipeline.gap_reset_ms =
            static_cast<std::int64_t>(positive((*p)["gap_reset_ms"], "pipeline.gap_reset_ms"));
      }
    }
    if (const ojson* s = section(doc, "sim")) {
      if (s->contains("tick_rate_hz")) cfg.tick_rate_hz = positive((*s)["tick_rate_hz"], "sim.tick_rate_hz");
      if (s->contains("profiles")) {
        std::filesystem::path p((*s)["profiles"].get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        try {
          cfg.profiles = ProfileLibrary::from_json(slurp(p.string()));
        } catch (const ProfileError& e) {
          throw ConfigError(p.string() + ": " + e.what());
        }
      }
    }
    if (const ojson* svc = section(doc, "service")) {
      if (svc->contains("bind_address")) cfg.bind_address = (*svc)["bind_address"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return cfg;
}

EngineConfig load_config(const std::string& path) {
  const std::filesystem::path p(path);
  return parse_config(slurp(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

std::optional<std::string> resolve_config_path(const std::optional<std::string>& explicit_path) {
  if (explicit_path && !explicit_path->empty()) return explicit_path;
  if (const char* env = std::getenv("GESTGAIT_CONFIG"); env && *env) return std::string(env);
  return std::nullopt;
}

EngineConfig load_config_or_default(const std::optional<std::string>& explicit_path) {
  const auto path = resolve_config_path(explicit_path);
  return path ? load_config(*path) : EngineConfig{};
}

}  // namespace gestgait
