#include "gestgait/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json_codec.hpp"

namespace gestgait {

bool operator==(const TraceHeader& a, const TraceHeader& b) {
  auto same_profile = [](const std::optional<AnchorProfile>& x,
                         const std::optional<AnchorProfile>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->gender == y->gender && x->height_cm == y->height_cm &&
           x->palm_width_override_cm == y->palm_width_override_cm;
  };
  return a.version == b.version && a.frame_width == b.frame_width &&
         a.frame_height == b.frame_height && a.focal_length_px == b.focal_length_px &&
         a.normalized == b.normalized && same_profile(a.profile, b.profile);
}

TraceError::TraceError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace codec {

namespace {

double finite_number(const ojson& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
  return x;
}

double positive(const ojson& j, const char* what) {
  const double x = finite_number(j, what);
  if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
  return x;
}

}  // namespace

AnchorProfile profile_from(const ojson& j) {
  if (!j.is_object()) throw std::invalid_argument("profile must be an object");
  AnchorProfile p;
  if (j.contains("gender")) {
    const auto g = gender_from_string(j["gender"].get<std::string>());
    if (!g) throw std::invalid_argument("unknown gender");
    p.gender = *g;
  }
  if (j.contains("height_cm")) p.height_cm = positive(j["height_cm"], "height_cm");
  if (j.contains("palm_width_cm") && !j["palm_width_cm"].is_null()) {
    p.palm_width_override_cm = positive(j["palm_width_cm"], "palm_width_cm");
  }
  return p;
}

ojson profile_json(const AnchorProfile& p) {
  ojson j;
  j["gender"] = std::string(to_string(p.gender));
  j["height_cm"] = p.height_cm;
  if (p.palm_width_override_cm) j["palm_width_cm"] = *p.palm_width_override_cm;
  return j;
}

TraceHeader header_from(const ojson& j) {
  if (!j.is_object()) throw std::invalid_argument("header must be an object");
  TraceHeader h;
  if (!j.contains("version")) throw std::invalid_argument("header without version");
  h.version = j["version"].get<int>();
  if (h.version != kTraceVersion) {
    throw std::invalid_argument("unsupported trace version " + std::to_string(h.version));
  }
  if (!j.contains("frame_width") || !j.contains("frame_height")) {
    throw std::invalid_argument("header needs frame_width and frame_height");
  }
  h.frame_width = positive(j["frame_width"], "frame_width");
  h.frame_height = positive(j["frame_height"], "frame_height");
  if (j.contains("focal_length_px") && !j["focal_length_px"].is_null()) {
    h.focal_length_px = positive(j["focal_length_px"], "focal_length_px");
  }
  if (j.contains("profile") && !j["profile"].is_null()) h.profile = profile_from(j["profile"]);
  if (j.contains("coords")) {
    const std::string c = j["coords"].get<std::string>();
    if (c == "normalized") {
      h.normalized = true;
    } else if (c != "pixel") {
      throw std::invalid_argument("coords must be pixel or normalized");
    }
  }
  return h;
}

TraceFrame frame_from(const ojson& j) {
  if (!j.is_object()) throw std::invalid_argument("frame must be an object");
  for (const char* key : {"t_ms", "landmarks", "conf"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("frame without ") + key);
  }
  TraceFrame f;
  const ojson& t = j["t_ms"];
  if (!t.is_number_integer()) throw std::invalid_argument("t_ms must be an integer");
  f.t_ms = t.get<std::int64_t>();
  const ojson& lm = j["landmarks"];
  if (!lm.is_array() || lm.size() != kLandmarkCount) {
    throw std::invalid_argument("expected 21 landmarks, got " +
                                (lm.is_array() ? std::to_string(lm.size()) : std::string("none")));
  }
  for (std::size_t i = 0; i < kLandmarkCount; ++i) {
    const ojson& p = lm[i];
    if (!p.is_array() || p.size() != 2) {
      throw std::invalid_argument("landmark " + std::to_string(i) + " must be [u, v]");
    }
    f.landmarks[i] = {finite_number(p[0], "u"), finite_number(p[1], "v")};
  }
  f.conf = finite_number(j["conf"], "conf");
  return f;
}

ojson header_json(const TraceHeader& h) {
  ojson j;
  j["version"] = h.version;
  j["frame_width"] = h.frame_width;
  j["frame_height"] = h.frame_height;
  if (h.focal_length_px) j["focal_length_px"] = *h.focal_length_px;
  if (h.profile) j["profile"] = profile_json(*h.profile);
  j["coords"] = h.normalized ? "normalized" : "pixel";
  return j;
}

ojson frame_json(const TraceFrame& f) {
  ojson lm = ojson::array();
  for (const Keypoint& p : f.landmarks) lm.push_back(ojson::array({p.u, p.v}));
  ojson j;
  j["t_ms"] = f.t_ms;
  j["landmarks"] = std::move(lm);
  j["conf"] = f.conf;
  return j;
}

}  // namespace codec

TraceHeader parse_header(std::string_view text) {
  try {
    return codec::header_from(codec::ojson::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

TraceFrame parse_frame(std::string_view text) {
  try {
    return codec::frame_from(codec::ojson::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

std::string header_to_json(const TraceHeader& header) { return codec::header_json(header).dump(); }
std::string frame_to_json(const TraceFrame& frame) { return codec::frame_json(frame).dump(); }

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      if (!have_header) {
        trace.header = parse_header(text);
        have_header = true;
      } else {
        trace.frames.push_back(parse_frame(text));
      }
    } catch (const std::invalid_argument& e) {
      throw TraceError(line, e.what());
    }
  }
  if (!have_header) throw TraceError(0, "trace has no header line");

  const auto by_time = [](const TraceFrame& a, const TraceFrame& b) { return a.t_ms < b.t_ms; };
  if (!std::is_sorted(trace.frames.begin(), trace.frames.end(), by_time)) {
    std::stable_sort(trace.frames.begin(), trace.frames.end(), by_time);
    trace.reordered = true;
    trace.warnings.push_back("timestamps not monotone; frames sorted by t_ms");
  }
  return trace;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError(0, "cannot open " + path);
  return read_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << header_to_json(trace.header) << '\n';
  for (const TraceFrame& f : trace.frames) out << frame_to_json(f) << '\n';
}

void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError(0, "cannot write " + path);
  write_trace(out, trace);
}

HandFrame to_hand_frame(const TraceFrame& frame, const TraceHeader& header,
                        const AugmentOptions& options) {
  const FrameSize size = frame_size(header);
  std::array<Keypoint, kLandmarkCount> px = frame.landmarks;
  if (header.normalized) {
    for (Keypoint& p : px) p = to_pixels(p, size);
  }
  return augment(px, frame.t_ms, size, frame.conf, options);
}

}  // namespace gestgait
