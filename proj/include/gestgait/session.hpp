#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "gestgait/config.hpp"
#include "gestgait/engine.hpp"

namespace gestgait {

enum class ErrorCode { ProtocolOrder, ControllerBusy, Malformed };

[[nodiscard]] std::string_view to_string(ErrorCode c) noexcept;

using ConnectionId = std::uint64_t;

/// Receives serialized telemetry for one connection, in order.
using Sink = std::function<void(std::string)>;

/// Transport-agnostic control service.
///
/// Client messages (JSON, "type" discriminator):
///   {"type":"hello","role":"controller"|"observer","header":{trace header}}
///   {"type":"frame","frame":{t_ms, landmarks, conf}}
///   {"type":"estop"}
///   {"type":"bye"}
/// Server messages carry a per-connection gapless "seq":
///   state, command_ack, event, error.
///
/// One connection at a time holds the controller role; everyone else
/// observes. E-stops overtake queued frames.
class Hub {
 public:
  explicit Hub(EngineConfig config);

  ConnectionId connect(Sink sink);
  /// Drops the connection, releasing the controller role if held.
  void disconnect(ConnectionId id);

  /// Queues a raw message. Thread-safe.
  void enqueue(ConnectionId id, std::string text);
  /// Processes queued messages: e-stops first, then frames in arrival order.
  void pump(double now_ms);
  void receive(ConnectionId id, std::string text, double now_ms) {
    enqueue(id, std::move(text));
    pump(now_ms);
  }

  /// Advances the simulator and broadcasts lifecycle events.
  void tick(double now_ms);

  [[nodiscard]] std::optional<ConnectionId> controller() const;
  [[nodiscard]] std::size_t connection_count() const;
  [[nodiscard]] std::optional<FsmSnapshot> fsm() const;

 private:
  struct Connection {
    Sink sink;
    std::uint64_t seq = 0;
    bool greeted = false;
  };
  struct Message;  // parsed JSON object
  struct Pending {
    ConnectionId from;
    std::shared_ptr<Message> msg;  // empty when parsing failed
    std::string parse_error;
  };

  void handle(const Pending& p, double now_ms);
  void on_hello(ConnectionId id, const Message& msg);
  void send(ConnectionId id, Message msg);
  void broadcast(const Message& msg);
  void error(ConnectionId id, ErrorCode code, const std::string& detail);
  void publish_frame(const FrameResult& r);
  void publish_state(const FrameResult& r);
  void publish_events(const std::vector<SimSample>& events, std::size_t begin, std::size_t end);
  void release_controller(ConnectionId id);

  EngineConfig config_;
  mutable std::recursive_mutex mu_;
  std::map<ConnectionId, Connection> connections_;
  ConnectionId next_id_ = 1;
  std::optional<ConnectionId> controller_;
  std::unique_ptr<Engine> engine_;
  std::deque<Pending> urgent_;
  std::deque<Pending> queue_;
};

}  // namespace gestgait
