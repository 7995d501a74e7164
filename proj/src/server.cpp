#include "gestgait/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <deque>
#include <iostream>

#include "gestgait/session.hpp"

namespace gestgait {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

using Clock = std::chrono::steady_clock;

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Hub& hub, std::function<double()> now)
      : ws_(std::move(socket)), hub_(hub), now_(std::move(now)) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      std::weak_ptr<WsSession> weak = self;
      self->id_ = self->hub_.connect([weak](std::string msg) {
        if (auto s = weak.lock()) s->write(std::move(msg));
      });
      self->connected_ = true;
      self->read();
    });
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->hub_.receive(self->id_, std::move(text), self->now_());
      self->read();
    });
  }

  void write(std::string msg) {
    outbox_.push_back(std::move(msg));
    if (outbox_.size() == 1) flush();
  }

  void flush() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->close();
                        return;
                      }
                      self->outbox_.pop_front();
                      if (!self->outbox_.empty()) self->flush();
                    });
  }

  void close() {
    if (!connected_) return;
    connected_ = false;
    hub_.disconnect(id_);
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  Hub& hub_;
  std::function<double()> now_;
  ConnectionId id_ = 0;
  bool connected_ = false;
  std::deque<std::string> outbox_;
};

}  // namespace

struct Server::Impl {
  Impl(EngineConfig config, const ServerOptions& options)
      : tick_period(std::chrono::microseconds(
            static_cast<std::int64_t>(1e6 / config.tick_rate_hz))),
        hub(std::move(config)),
        acceptor(io),
        timer(io),
        epoch(Clock::now()) {
    const tcp::endpoint ep(asio::ip::make_address(options.address), options.port);
    acceptor.open(ep.protocol());
    acceptor.set_option(asio::socket_base::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen();
  }

  double now_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - epoch).count();
  }

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<WsSession>(std::move(socket), hub, [this] { return now_ms(); })->start();
      accept();
    });
  }

  void schedule_tick() {
    timer.expires_after(tick_period);
    timer.async_wait([this](beast::error_code ec) {
      if (ec) return;
      hub.tick(now_ms());
      schedule_tick();
    });
  }

  std::chrono::microseconds tick_period;
  asio::io_context io;
  Hub hub;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  Clock::time_point epoch;
};

Server::Server(EngineConfig config, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), options)) {}

Server::~Server() = default;

std::uint16_t Server::port() const noexcept { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  impl_->accept();
  impl_->schedule_tick();
  impl_->io.run();
}

void Server::stop() {
  asio::post(impl_->io, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    impl_->timer.cancel();
    impl_->io.stop();
  });
}

}  // namespace gestgait
