#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "gestgait/config.hpp"

namespace gestgait {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
};

/// WebSocket front end for Hub. One I/O thread; the simulator ticks on a
/// timer at the configured rate, independent of frame arrival.
class Server {
 public:
  Server(EngineConfig config, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Port actually bound (useful with port 0).
  [[nodiscard]] std::uint16_t port() const noexcept;

  /// Serves until stop(). Blocks.
  void run();
  /// Thread-safe.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gestgait
