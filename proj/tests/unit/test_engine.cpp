#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "gestgait/engine.hpp"
#include "json.hpp"
#include "scenario.hpp"

using namespace gestgait;
using G = GestureLabel;

namespace {

struct Run {
  std::vector<FrameResult> frames;
  std::vector<SimSample> tail;
  FsmSnapshot fsm;
};

Run run(const Trace& t, const EngineConfig& cfg = {}) {
  Engine e(cfg, resolve_camera(cfg, t.header), resolve_profile(cfg, t.header), t.header);
  Run r;
  for (const TraceFrame& f : t.frames) r.frames.push_back(e.process(f));
  r.tail = e.drain();
  r.fsm = e.fsm();
  return r;
}

std::vector<G> commands(const Run& r) {
  std::vector<G> out;
  for (const auto& f : r.frames) {
    if (f.command) out.push_back(f.command->command.source_gesture);
  }
  return out;
}

bool has_event(const std::vector<SimSample>& v, GaitEventKind k, const std::string& profile) {
  for (const auto& s : v) {
    if (s.event.kind == k && s.event.profile == profile) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("a G1 press and release steps the right leg forward") {
  scenario::TraceBuilder b;
  b.command(G::G0).idle(3500).command(G::G1).idle(300);
  const Run r = run(b.build());
  REQUIRE(commands(r) == std::vector<G>{G::G0, G::G1});
  for (const auto& f : r.frames) {
    if (f.command) CHECK(f.command->result.accepted);
  }
  std::vector<SimSample> all;
  for (const auto& f : r.frames) all.insert(all.end(), f.sim.begin(), f.sim.end());
  all.insert(all.end(), r.tail.begin(), r.tail.end());
  CHECK(has_event(all, GaitEventKind::Completed, "power_on"));
  CHECK(has_event(all, GaitEventKind::Started, "initial_step_right"));
  CHECK(r.tail.back().event.kind == GaitEventKind::Completed);
  CHECK(r.tail.back().event.profile == "initial_step_right");
  CHECK(r.fsm.state == GaitState::RightForward);
  CHECK_FALSE(r.fsm.executing);
}

TEST_CASE("the command fires on the release frame") {
  scenario::TraceBuilder b;
  b.command(G::G0);
  const Run r = run(b.build());
  std::size_t press = 0, release = 0;
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    if (r.frames[i].edge == ButtonEdge::PressEdge) press = i;
    if (r.frames[i].edge == ButtonEdge::ReleaseEdge) release = i;
  }
  REQUIRE(press > 0);
  REQUIRE(release > press);
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    CHECK(r.frames[i].command.has_value() == (i == release));
  }
  CHECK(r.frames[release].command_started);
  CHECK(r.frames[release].sim.back().event.kind == GaitEventKind::Started);
  CHECK(r.frames[press].depth->depth_cm < 20.0);
  CHECK(r.frames[0].depth->depth_cm > 20.0);
}

TEST_CASE("noise without a clean press gives no commands") {
  scenario::TraceBuilder b;
  b.jitter(0.5, 3);
  b.idle(2000);
  // Unrecognized hand pushed through the button.
  const auto claw = fixtures::confusable_landmarks(fixtures::Confusable::TigerClaw);
  b.hold(claw, 5, false).hold(claw, 5, true).hold(claw, 5, false);
  // Recognized gestures that never press.
  for (G g : kDefinedGestures) b.hold(fixtures::gesture_landmarks(g), 6, false);
  // A press with only two frames of the gesture beforehand.
  b.hold(fixtures::gesture_landmarks(G::G0), 2, false);
  b.hold(fixtures::gesture_landmarks(G::G2), 3, true).hold(fixtures::gesture_landmarks(G::G2), 3, false);
  const Run r = run(b.build());
  CHECK(commands(r).empty());
  CHECK(r.fsm == FsmSnapshot{});
}

TEST_CASE("replay is deterministic") {
  const Trace t = scenario::session(400);
  std::ostringstream a, b;
  const ReplaySummary sa = replay(t, EngineConfig{}, a);
  const ReplaySummary sb = replay(t, EngineConfig{}, b);
  CHECK(a.str() == b.str());
  CHECK(sa.commands == sb.commands);
  CHECK(sa.commands > 3);
  CHECK(sa.accepted == sa.commands);
  CHECK(sa.errors == 0);

  std::istringstream lines(a.str());
  std::string line, last;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    last = line;
    ++n;
  }
  CHECK(n == t.frames.size() + 1);
  const auto end = nlohmann::json::parse(last);
  CHECK(end["type"] == "end");
  CHECK(end["frames"] == t.frames.size());
  CHECK(end["commands"] == sa.commands);
}

TEST_CASE("a focal length is required") {
  TraceHeader h = fixtures::header();
  h.focal_length_px.reset();
  EngineConfig cfg;
  CHECK_THROWS_AS((void)resolve_camera(cfg, h), ConfigError);
  cfg.focal_length_px = 700;
  CHECK(resolve_camera(cfg, h).focal_length_px == 700.0);
  h.focal_length_px = 900;
  CHECK(resolve_camera(cfg, h).focal_length_px == 900.0);
  CHECK_THROWS_AS(Engine(cfg, CameraModel{0.0}, AnchorProfile{}, h), ConfigError);
}

TEST_CASE("the trace profile overrides the configured user") {
  EngineConfig cfg;
  cfg.user.palm_width_override_cm = 9.0;
  TraceHeader h = fixtures::header();
  CHECK(resolve_profile(cfg, h).palm_width_cm() == h.profile->palm_width_cm());
  CHECK(resolve_profile(cfg, h).palm_width_cm() != 9.0);
  h.profile.reset();
  CHECK(resolve_profile(cfg, h).palm_width_cm() == 9.0);
}

TEST_CASE("malformed frames are skipped") {
  scenario::TraceBuilder b;
  b.hold(fixtures::gesture_landmarks(G::G0), 2, false);
  Trace t = b.build();
  TraceFrame bad = t.frames.back();
  bad.t_ms += 33;
  bad.landmarks[7].u = std::numeric_limits<double>::quiet_NaN();
  t.frames.push_back(bad);
  TraceFrame good = t.frames.front();
  good.t_ms = bad.t_ms + 33;
  t.frames.push_back(good);

  const Run r = run(t);
  REQUIRE(r.frames.size() == 4);
  CHECK(r.frames[2].error.has_value());
  CHECK(r.frames[2].label == G::Unrecognized);
  CHECK_FALSE(r.frames[2].depth.has_value());
  // The skipped frame did not break the window: two plus one makes three.
  CHECK_FALSE(r.frames[1].stable.has_value());
  CHECK(r.frames[3].stable == G::G0);

  const auto j = nlohmann::json::parse(frame_result_json(r.frames[2]));
  CHECK(j["error"].is_string());
}

TEST_CASE("emergency stop aborts the running gait") {
  scenario::TraceBuilder b;
  b.command(G::G0);
  const Trace t = b.build();
  EngineConfig cfg;
  Engine e(cfg, resolve_camera(cfg, t.header), resolve_profile(cfg, t.header), t.header);
  std::int64_t last = 0;
  for (const auto& f : t.frames) {
    (void)e.process(f);
    last = f.t_ms;
  }
  REQUIRE(e.sim_active());
  const EStopResult s = e.estop(static_cast<double>(last) + 100);
  CHECK(s.aborted);
  CHECK(s.sim.back().event.kind == GaitEventKind::Aborted);
  CHECK(s.fsm.halted);
  CHECK_FALSE(e.sim_active());
  CHECK(e.drain().empty());

  const EStopResult again = e.estop(static_cast<double>(last) + 200);
  CHECK_FALSE(again.aborted);
  CHECK(again.fsm.halted);
}

TEST_CASE("drain runs the trajectory to its end") {
  scenario::TraceBuilder b;
  b.command(G::G0);
  const Trace t = b.build();
  EngineConfig cfg;
  Engine e(cfg, resolve_camera(cfg, t.header), resolve_profile(cfg, t.header), t.header);
  double started = 0;
  for (const auto& f : t.frames) {
    const FrameResult r = e.process(f);
    if (r.command_started) started = r.sim.back().t_ms;
  }
  const auto tail = e.drain();
  REQUIRE(tail.size() == 1);
  CHECK(tail[0].event.kind == GaitEventKind::Completed);
  CHECK(tail[0].t_ms == doctest::Approx(started + 3000));
  CHECK(e.fsm() == FsmSnapshot{GaitState::Standing, WalkMode::None, false, false, false});
  CHECK(e.drain().empty());
}

TEST_CASE("continuous walking keeps stepping on the clock") {
  scenario::TraceBuilder b;
  b.command(G::G0).idle(3500).command(G::G5).idle(5000);
  const Run r = run(b.build());
  std::size_t steps = 0;
  for (const auto& f : r.frames) {
    for (const auto& s : f.sim) {
      if (s.event.kind == GaitEventKind::Completed && s.event.profile.find("step_") != std::string::npos) ++steps;
    }
  }
  CHECK(steps >= 2);
  CHECK(r.fsm.mode == WalkMode::Continuous);
}

TEST_CASE("frame result JSON") {
  scenario::TraceBuilder b;
  b.command(G::G0);
  const Run r = run(b.build());
  const auto& last = r.frames.back();
  const auto j = nlohmann::json::parse(frame_result_json(last));
  for (const char* key : {"type", "t_ms", "label", "stable", "depth_cm", "button", "edge", "command",
                          "sim", "fsm", "pose", "error"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["type"] == "frame");
  CHECK(j["pose"].size() == 4);
  CHECK(j["error"].is_null());

  const auto k = nlohmann::json::parse(frame_result_json(*std::find_if(
      r.frames.begin(), r.frames.end(), [](const FrameResult& f) { return f.command.has_value(); })));
  CHECK(k["command"]["gesture"] == "G0");
  CHECK(k["command"]["accepted"] == true);
  CHECK(k["command"]["plan"] == nlohmann::json::array({"Standing"}));
  CHECK(k["sim"].back()["event"] == "started");
  CHECK(k["sim"].back()["profile"] == "power_on");
}
