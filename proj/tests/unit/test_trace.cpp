#include <cstdio>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "gestgait/trace.hpp"
#include "json.hpp"
#include "scenario.hpp"

using namespace gestgait;

namespace {

std::string to_text(const Trace& t) {
  std::ostringstream os;
  write_trace(os, t);
  return os.str();
}

Trace from_text(const std::string& s) {
  std::istringstream in(s);
  return read_trace(in);
}

std::string frame_line(std::int64_t t, std::size_t n = 21) {
  nlohmann::json lm = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) lm.push_back({100.0 + static_cast<double>(i), 200.0});
  return nlohmann::json{{"t_ms", t}, {"landmarks", lm}, {"conf", 0.9}}.dump();
}

const std::string kHeader =
    R"({"version":1,"frame_width":1280,"frame_height":720,"focal_length_px":900})";

}  // namespace

TEST_CASE("header only trace") {
  const Trace t = from_text(kHeader + "\n");
  CHECK(t.frames.empty());
  CHECK(t.header.frame_width == 1280.0);
  CHECK(t.header.focal_length_px == 900.0);
  CHECK_FALSE(t.header.profile.has_value());
  CHECK_FALSE(t.header.normalized);
}

TEST_CASE("three frames become three hand frames") {
  const Trace t =
      from_text(kHeader + "\n" + frame_line(0) + "\n" + frame_line(33) + "\n" + frame_line(66) + "\n");
  REQUIRE(t.frames.size() == 3);
  for (const auto& f : t.frames) {
    const HandFrame h = to_hand_frame(f, t.header);
    CHECK(h.timestamp_ms == f.t_ms);
    CHECK(h[0] == Keypoint{100, 200});
    CHECK(h.detection_confidence == 0.9);
  }
  CHECK_FALSE(t.reordered);
}

TEST_CASE("a 20-landmark frame fails at its line") {
  const std::string text = kHeader + "\n" + frame_line(0) + "\n" + frame_line(33, 20) + "\n";
  try {
    (void)from_text(text);
    FAIL("no error");
  } catch (const TraceError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("21") != std::string::npos);
  }
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS((void)from_text(""), TraceError);
  CHECK_THROWS_AS((void)from_text("[1,2]\n"), TraceError);
  CHECK_THROWS_AS((void)from_text(R"({"version":2,"frame_width":1,"frame_height":1})"), TraceError);
  CHECK_THROWS_AS((void)from_text(R"({"version":1,"frame_width":0,"frame_height":1})"), TraceError);
  CHECK_THROWS_AS((void)from_text(R"({"version":1,"frame_width":10,"frame_height":10,"coords":"cm"})"),
                  TraceError);
  const std::string float_t =
      kHeader + "\n" + R"({"t_ms":1.5,"landmarks":[],"conf":1})" + "\n";
  CHECK_THROWS_AS((void)from_text(float_t), TraceError);
  CHECK_THROWS_AS((void)from_text(kHeader + "\n{not json\n"), TraceError);
  CHECK_THROWS_AS((void)read_trace_file("/nonexistent/trace.jsonl"), TraceError);
}

TEST_CASE("out of order frames are sorted stably with a warning") {
  const Trace t = from_text(kHeader + "\n" + frame_line(66) + "\n" + frame_line(0) + "\n" +
                            frame_line(33) + "\n");
  CHECK(t.reordered);
  REQUIRE(t.frames.size() == 3);
  CHECK(t.frames[0].t_ms == 0);
  CHECK(t.frames[2].t_ms == 66);
  CHECK(t.warnings.size() == 1);
}

TEST_CASE("canonical traces round trip byte for byte") {
  const Trace t = scenario::session(200);
  const std::string a = to_text(t);
  const std::string b = to_text(from_text(a));
  CHECK(a == b);
  const Trace back = from_text(a);
  CHECK(back.header == t.header);
  REQUIRE(back.frames.size() == t.frames.size());
  for (std::size_t i = 0; i < t.frames.size(); ++i) REQUIRE(back.frames[i] == t.frames[i]);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "gestgait_trace_test.jsonl";
  Trace t;
  t.header = fixtures::header(750);
  t.frames.push_back(fixtures::trace_frame(fixtures::gesture_landmarks(GestureLabel::G2), 10, 0.5));
  write_trace_file(path.string(), t);
  const Trace back = read_trace_file(path.string());
  CHECK(back.header == t.header);
  CHECK(back.frames == t.frames);
  std::filesystem::remove(path);
}

TEST_CASE("header fields and order") {
  TraceHeader h = fixtures::header(1000);
  h.profile->gender = Gender::Female;
  h.profile->height_cm = 160;
  const std::string s = header_to_json(h);
  CHECK(s.find("\"version\"") < s.find("\"frame_width\""));
  CHECK(s.find("\"frame_height\"") < s.find("\"focal_length_px\""));
  CHECK(s.find("\"profile\"") < s.find("\"coords\""));
  CHECK(parse_header(s) == h);

  TraceHeader bare;
  bare.frame_width = 640;
  bare.frame_height = 480;
  bare.normalized = true;
  const std::string b = header_to_json(bare);
  CHECK(b.find("focal_length_px") == std::string::npos);
  CHECK(b.find("\"normalized\"") != std::string::npos);
  CHECK(parse_header(b) == bare);
  CHECK_THROWS_AS((void)parse_header("{}"), std::invalid_argument);
}

TEST_CASE("frame object codec") {
  const TraceFrame f = fixtures::trace_frame(fixtures::gesture_landmarks(GestureLabel::Rock), 1234, 0.75);
  const std::string s = frame_to_json(f);
  CHECK(s.find("\"t_ms\"") < s.find("\"landmarks\""));
  CHECK(s.find("\"landmarks\"") < s.find("\"conf\""));
  CHECK(parse_frame(s) == f);
  CHECK_THROWS_AS((void)parse_frame(R"({"t_ms":0,"conf":1})"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_frame(R"({"t_ms":0,"landmarks":[[1]],"conf":1})"), std::invalid_argument);
}

TEST_CASE("normalized coordinates") {
  TraceHeader h;
  h.frame_width = 1000;
  h.frame_height = 500;
  h.normalized = true;
  TraceFrame f;
  f.landmarks.fill({0.5, 0.5});
  f.landmarks[0] = {0.1, 0.2};
  const HandFrame hf = to_hand_frame(f, h);
  CHECK(hf[0] == Keypoint{100, 100});
  CHECK(hf[1] == Keypoint{500, 250});
}
