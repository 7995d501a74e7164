#include "gestgait/session.hpp"

#include "json_codec.hpp"

namespace gestgait {

using codec::ojson;

struct Hub::Message {
  ojson j;
};

std::string_view to_string(ErrorCode c) noexcept {
  switch (c) {
    case ErrorCode::ProtocolOrder: return "ProtocolOrder";
    case ErrorCode::ControllerBusy: return "ControllerBusy";
    case ErrorCode::Malformed: return "Malformed";
  }
  return "?";
}

Hub::Hub(EngineConfig config) : config_(std::move(config)) {}

ConnectionId Hub::connect(Sink sink) {
  std::lock_guard lock(mu_);
  const ConnectionId id = next_id_++;
  connections_[id] = Connection{std::move(sink), 0, false};
  return id;
}

void Hub::disconnect(ConnectionId id) {
  std::lock_guard lock(mu_);
  release_controller(id);
  connections_.erase(id);
}

void Hub::release_controller(ConnectionId id) {
  if (controller_ == id) controller_.reset();
}

void Hub::enqueue(ConnectionId id, std::string text) {
  Pending p{id, nullptr, {}};
  try {
    auto j = ojson::parse(text);
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
      p.parse_error = "message must be an object with a string \"type\"";
    } else {
      p.msg = std::make_shared<Message>(Message{std::move(j)});
    }
  } catch (const nlohmann::json::exception& e) {
    p.parse_error = e.what();
  }
  std::lock_guard lock(mu_);
  if (p.msg && p.msg->j["type"] == "estop") {
    urgent_.push_back(std::move(p));
  } else {
    queue_.push_back(std::move(p));
  }
}

void Hub::pump(double now_ms) {
  std::lock_guard lock(mu_);
  for (;;) {
    std::deque<Pending>& lane = !urgent_.empty() ? urgent_ : queue_;
    if (lane.empty()) break;
    Pending p = std::move(lane.front());
    lane.pop_front();
    handle(p, now_ms);
  }
}

void Hub::tick(double now_ms) {
  std::lock_guard lock(mu_);
  if (!engine_) return;
  std::vector<SimSample> events;
  for (SimSample& s : engine_->tick(now_ms)) {
    if (is_lifecycle(s)) events.push_back(std::move(s));
  }
  publish_events(events, 0, events.size());
}

std::optional<ConnectionId> Hub::controller() const {
  std::lock_guard lock(mu_);
  return controller_;
}

std::size_t Hub::connection_count() const {
  std::lock_guard lock(mu_);
  return connections_.size();
}

std::optional<FsmSnapshot> Hub::fsm() const {
  std::lock_guard lock(mu_);
  if (!engine_) return std::nullopt;
  return engine_->fsm();
}

void Hub::send(ConnectionId id, Message msg) {
  const auto it = connections_.find(id);
  if (it == connections_.end()) return;
  // seq goes right after type so logs read naturally.
  ojson out;
  out["type"] = msg.j["type"];
  out["seq"] = ++it->second.seq;
  for (auto& [k, v] : msg.j.items()) {
    if (k != "type") out[k] = std::move(v);
  }
  it->second.sink(out.dump());
}

void Hub::broadcast(const Message& msg) {
  for (auto& [id, conn] : connections_) {
    if (conn.greeted) send(id, msg);
  }
}

void Hub::error(ConnectionId id, ErrorCode code, const std::string& detail) {
  Message m;
  m.j["type"] = "error";
  m.j["code"] = std::string(to_string(code));
  m.j["detail"] = detail;
  send(id, std::move(m));
}

void Hub::publish_events(const std::vector<SimSample>& events, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    Message m;
    m.j = codec::sample_json(events[i]);
    m.j["type"] = "event";
    broadcast(m);
  }
}

void Hub::publish_frame(const FrameResult& r) {
  const std::size_t before_command = r.sim.size() - (r.command_started ? 1 : 0);
  publish_events(r.sim, 0, before_command);

  if (r.command) {
    Message ack;
    ack.j["type"] = "command_ack";
    ack.j["t_ms"] = r.t_ms;
    ack.j["gesture"] = std::string(to_string(r.command->command.source_gesture));
    ack.j["accepted"] = r.command->result.accepted;
    if (r.command->result.accepted) {
      ack.j["plan"] = codec::plan_json(r.command->result.plan);
    } else {
      ack.j["reason"] = std::string(to_string(r.command->result.reason));
    }
    broadcast(ack);
  }
  publish_events(r.sim, before_command, r.sim.size());
  publish_state(r);
}

void Hub::publish_state(const FrameResult& r) {
  Message st;
  st.j["type"] = "state";
  st.j["t_ms"] = r.t_ms;
  st.j["label"] = std::string(to_string(r.label));
  st.j["stable_label"] = r.stable ? ojson(std::string(to_string(*r.stable))) : ojson(nullptr);
  st.j["depth_cm"] = r.depth ? ojson(r.depth->depth_cm) : ojson(nullptr);
  st.j["button"] = std::string(to_string(r.button));
  st.j["fsm_state"] = std::string(to_string(r.fsm.state));
  st.j["mode"] = std::string(to_string(r.fsm.mode));
  st.j["executing"] = r.fsm.executing;
  st.j["halted"] = r.fsm.halted;
  st.j["joint_pose"] = codec::pose_json(r.pose);
  broadcast(st);
}

void Hub::on_hello(ConnectionId id, const Message& msg) {
  Connection& conn = connections_.at(id);
  const ojson& j = msg.j;
  const std::string role = j.contains("role") ? j["role"].get<std::string>() : "controller";
  if (role != "controller" && role != "observer") {
    error(id, ErrorCode::Malformed, "role must be controller or observer");
    return;
  }
  if (role == "observer") {
    conn.greeted = true;
    return;
  }
  if (controller_ && *controller_ != id) {
    conn.greeted = true;  // joins as an observer
    error(id, ErrorCode::ControllerBusy, "another connection holds the controller role");
    return;
  }
  if (!j.contains("header")) {
    error(id, ErrorCode::Malformed, "controller hello needs a header");
    return;
  }
  TraceHeader header;
  CameraModel camera;
  try {
    header = codec::header_from(j["header"]);
    camera = resolve_camera(config_, header);
  } catch (const std::exception& e) {
    error(id, ErrorCode::Malformed, e.what());
    return;
  }
  const AnchorProfile profile = resolve_profile(config_, header);
  if (engine_) {
    engine_->begin_stream(camera, profile, header);
  } else {
    engine_ = std::make_unique<Engine>(config_, camera, profile, header);
  }
  conn.greeted = true;
  controller_ = id;
}

void Hub::handle(const Pending& p, double now_ms) {
  const ConnectionId id = p.from;
  if (!connections_.count(id)) return;
  if (!p.msg) {
    error(id, ErrorCode::Malformed, p.parse_error);
    return;
  }
  const ojson& j = p.msg->j;
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "hello") {
      on_hello(id, *p.msg);
    } else if (type == "bye") {
      release_controller(id);
      connections_.at(id).greeted = false;
    } else if (type == "frame" || type == "estop") {
      if (!connections_.at(id).greeted) {
        error(id, ErrorCode::ProtocolOrder, type + " before hello");
      } else if (controller_ != id) {
        error(id, ErrorCode::ControllerBusy, "only the controller may send " + type);
      } else if (type == "estop") {
        const EStopResult r = engine_->estop(now_ms);
        publish_events(r.sim, 0, r.sim.size());
        // Shows the halted machine even when nothing was running.
        FrameResult snapshot;
        snapshot.t_ms = static_cast<std::int64_t>(now_ms);
        snapshot.fsm = r.fsm;
        snapshot.pose = r.pose;
        publish_state(snapshot);
      } else {
        if (!j.contains("frame")) throw std::invalid_argument("frame message without frame");
        const TraceFrame f = codec::frame_from(j["frame"]);
        const FrameResult r = engine_->process(f, now_ms);
        if (r.error) error(id, ErrorCode::Malformed, *r.error);
        publish_frame(r);
      }
    } else {
      error(id, ErrorCode::Malformed, "unknown message type " + type);
    }
  } catch (const nlohmann::json::exception& e) {
    error(id, ErrorCode::Malformed, e.what());
  } catch (const std::invalid_argument& e) {
    error(id, ErrorCode::Malformed, e.what());
  }
}

}  // namespace gestgait
