#include "gestgait/engine.hpp"

#include "json_codec.hpp"

namespace gestgait {

namespace codec {

ojson pose_json(const JointPose& p) {
  return ojson::array({p.hip_left, p.knee_left, p.hip_right, p.knee_right});
}

ojson sample_json(const SimSample& s) {
  ojson j;
  j["t_ms"] = s.t_ms;
  j["event"] = std::string(to_string(s.event.kind));
  j["profile"] = s.event.profile;
  j["fraction"] = s.event.fraction;
  return j;
}

ojson fsm_json(const FsmSnapshot& f) {
  ojson j;
  j["state"] = std::string(to_string(f.state));
  j["mode"] = std::string(to_string(f.mode));
  j["executing"] = f.executing;
  j["halted"] = f.halted;
  j["stop_pending"] = f.stop_pending;
  return j;
}

ojson plan_json(const GaitPlan& p) {
  ojson a = ojson::array();
  for (GaitState s : p.states()) a.push_back(std::string(to_string(s)));
  return a;
}

}  // namespace codec

using codec::ojson;

bool is_lifecycle(const SimSample& s) noexcept { return s.event.kind != GaitEventKind::Progress; }

namespace {

void append_lifecycle(std::vector<SimSample>& out, std::vector<SimSample>&& samples) {
  for (SimSample& s : samples) {
    if (is_lifecycle(s)) out.push_back(std::move(s));
  }
}

}  // namespace

CameraModel resolve_camera(const EngineConfig& config, const TraceHeader& header) {
  if (header.focal_length_px) return {*header.focal_length_px};
  if (config.focal_length_px) return {*config.focal_length_px};
  throw ConfigError("no focal length: set camera.focal_length_px or the trace header's focal_length_px");
}

AnchorProfile resolve_profile(const EngineConfig& config, const TraceHeader& header) {
  return header.profile ? *header.profile : config.user;
}

Engine::Engine(const EngineConfig& config, CameraModel camera, AnchorProfile profile,
               TraceHeader stream)
    : rules_(RuleTable::standard()),
      augment_(config.augment),
      camera_(camera),
      profile_(profile),
      stream_(std::move(stream)),
      button_config_(config.button),
      button_(config.button.center, config.button.half_extent_px, config.button.depth_threshold_cm),
      pipeline_(config.pipeline),
      sim_(config.profiles, config.tick_rate_hz) {
  if (!(camera_.focal_length_px > 0.0)) throw ConfigError("focal length must be positive");
}

void Engine::begin_stream(CameraModel camera, AnchorProfile profile, TraceHeader stream) {
  if (!(camera.focal_length_px > 0.0)) throw ConfigError("focal length must be positive");
  camera_ = camera;
  profile_ = profile;
  stream_ = std::move(stream);
  button_ = VirtualButton(button_config_.center, button_config_.half_extent_px,
                          button_config_.depth_threshold_cm);
  pipeline_.reset();
}

std::vector<SimSample> Engine::tick(double now_ms) {
  std::vector<SimSample> out;
  for (;;) {
    std::vector<SimSample> batch = sim_.advance_to(now_ms);
    const bool completed = !batch.empty() && batch.back().event.kind == GaitEventKind::Completed;
    const double t_end = completed ? batch.back().t_ms : 0.0;
    out.insert(out.end(), std::make_move_iterator(batch.begin()),
               std::make_move_iterator(batch.end()));
    if (!completed || !fsm_.executing()) break;

    const GaitState from = fsm_.state();
    const GaitState to = fsm_.on_gait_complete();
    if (!fsm_.executing()) break;
    out.push_back(sim_.start(profile_name_for(from, to), t_end));
  }
  return out;
}

std::vector<SimSample> Engine::drain() {
  const auto done = sim_.completion_time();
  if (!done) return {};
  std::vector<SimSample> out;
  append_lifecycle(out, tick(*done));
  return out;
}

CommandOutcome Engine::dispatch(const GaitCommand& cmd, double now_ms, FrameResult& r) {
  const FsmSnapshot before = fsm_.snapshot();
  ApplyResult res = fsm_.apply(cmd);
  if (res.accepted && !before.executing) {
    // A halted machine re-initializes from Unpowered.
    const GaitState from = before.halted ? GaitState::Unpowered : before.state;
    r.sim.push_back(sim_.start(profile_name_for(from, res.plan.phases.front()), now_ms));
    r.command_started = true;
  }
  return CommandOutcome{cmd, std::move(res)};
}

FrameResult Engine::process(const TraceFrame& frame, double now_ms) {
  FrameResult r;
  r.t_ms = frame.t_ms;
  append_lifecycle(r.sim, tick(now_ms));

  HandFrame hand;
  try {
    hand = to_hand_frame(frame, stream_, augment_);
  } catch (const std::invalid_argument& e) {
    r.error = e.what();
    r.stable = pipeline_.stable_label();
    r.button = button_.state();
    r.fsm = fsm_.snapshot();
    r.pose = sim_.pose();
    return r;
  }

  r.label = rules_.classify(hand);
  r.depth = estimate_depth(hand, camera_, profile_);
  r.edge = button_.update(hand, r.depth);
  r.button = button_.state();
  const auto cmd = pipeline_.step(r.label, r.edge, frame.t_ms);
  r.stable = pipeline_.stable_label();
  if (cmd) r.command = dispatch(*cmd, now_ms, r);
  r.fsm = fsm_.snapshot();
  r.pose = sim_.pose();
  return r;
}

EStopResult Engine::estop(double now_ms) {
  EStopResult r;
  append_lifecycle(r.sim, tick(now_ms));
  (void)pipeline_.emergency_stop(static_cast<std::int64_t>(now_ms));
  fsm_.estop();
  if (auto s = sim_.abort(now_ms)) {
    r.sim.push_back(*s);
    r.aborted = true;
  }
  r.fsm = fsm_.snapshot();
  r.pose = sim_.pose();
  return r;
}

std::string frame_result_json(const FrameResult& r) {
  ojson j;
  j["type"] = "frame";
  j["t_ms"] = r.t_ms;
  j["label"] = std::string(to_string(r.label));
  j["stable"] = r.stable ? ojson(std::string(to_string(*r.stable))) : ojson(nullptr);
  j["depth_cm"] = r.depth ? ojson(r.depth->depth_cm) : ojson(nullptr);
  j["button"] = std::string(to_string(r.button));
  j["edge"] = std::string(to_string(r.edge));
  if (r.command) {
    ojson c;
    c["gesture"] = std::string(to_string(r.command->command.source_gesture));
    c["accepted"] = r.command->result.accepted;
    if (r.command->result.accepted) {
      c["plan"] = codec::plan_json(r.command->result.plan);
    } else {
      c["reason"] = std::string(to_string(r.command->result.reason));
    }
    j["command"] = std::move(c);
  } else {
    j["command"] = nullptr;
  }
  ojson sim = ojson::array();
  for (const SimSample& s : r.sim) sim.push_back(codec::sample_json(s));
  j["sim"] = std::move(sim);
  j["fsm"] = codec::fsm_json(r.fsm);
  j["pose"] = codec::pose_json(r.pose);
  j["error"] = r.error ? ojson(*r.error) : ojson(nullptr);
  return j.dump();
}

ReplaySummary replay(const Trace& trace, const EngineConfig& config, std::ostream& events) {
  Engine engine(config, resolve_camera(config, trace.header), resolve_profile(config, trace.header),
                trace.header);
  ReplaySummary summary;
  double last_t = 0.0;
  for (const TraceFrame& f : trace.frames) {
    const FrameResult r = engine.process(f);
    events << frame_result_json(r) << '\n';
    ++summary.frames;
    if (r.error) ++summary.errors;
    if (r.command) {
      ++summary.commands;
      if (r.command->result.accepted) ++summary.accepted;
    }
    last_t = static_cast<double>(f.t_ms);
  }

  const auto tail = engine.drain();
  ojson end;
  end["type"] = "end";
  end["t_ms"] = tail.empty() ? last_t : tail.back().t_ms;
  ojson sim = ojson::array();
  for (const SimSample& s : tail) sim.push_back(codec::sample_json(s));
  end["sim"] = std::move(sim);
  end["fsm"] = codec::fsm_json(engine.fsm());
  end["pose"] = codec::pose_json(engine.pose());
  end["frames"] = summary.frames;
  end["commands"] = summary.commands;
  end["errors"] = summary.errors;
  end["reordered"] = trace.reordered;
  events << end.dump() << '\n';
  summary.final_fsm = engine.fsm();
  return summary;
}

}  // namespace gestgait
