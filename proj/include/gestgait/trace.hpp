#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gestgait/depth.hpp"
#include "gestgait/landmarks.hpp"

namespace gestgait {

inline constexpr int kTraceVersion = 1;

struct TraceHeader {
  int version = kTraceVersion;
  double frame_width = 0.0;
  double frame_height = 0.0;
  std::optional<double> focal_length_px;
  std::optional<AnchorProfile> profile;
  // Landmarks in [0, 1] instead of pixels.
  bool normalized = false;

  friend bool operator==(const TraceHeader& a, const TraceHeader& b);
};

struct TraceFrame {
  std::int64_t t_ms = 0;
  std::array<Keypoint, kLandmarkCount> landmarks{};
  double conf = 1.0;

  friend bool operator==(const TraceFrame&, const TraceFrame&) = default;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceFrame> frames;
  // Timestamps went backwards somewhere and the frames were stably sorted.
  bool reordered = false;
  std::vector<std::string> warnings;
};

/// Parse failure. line() is 1-based; 0 when no line applies.
class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[nodiscard]] Trace read_trace(std::istream& in);
[[nodiscard]] Trace read_trace_file(const std::string& path);

void write_trace(std::ostream& out, const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);

// Single-object codecs, shared with the live message channel. Parsers throw
// std::invalid_argument with a short reason.
[[nodiscard]] TraceHeader parse_header(std::string_view json_text);
[[nodiscard]] TraceFrame parse_frame(std::string_view json_text);
[[nodiscard]] std::string header_to_json(const TraceHeader& header);
[[nodiscard]] std::string frame_to_json(const TraceFrame& frame);

[[nodiscard]] inline FrameSize frame_size(const TraceHeader& h) noexcept {
  return {h.frame_width, h.frame_height};
}

/// Converts to pixels if needed and runs augment(). Throws MalformedFrame.
[[nodiscard]] HandFrame to_hand_frame(const TraceFrame& frame, const TraceHeader& header,
                                      const AugmentOptions& options = {});

}  // namespace gestgait
