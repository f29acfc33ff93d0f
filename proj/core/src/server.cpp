#include "gbmr/server.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "gbmr/protocol.hpp"

namespace gbmr {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

struct Shared {
  ServerConfig cfg;
  std::atomic<std::uint64_t> next_id{1};
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket&& socket, Shared& shared, std::string id)
      : ws_(std::move(socket)), shared_(shared), id_(std::move(id)) {}

  ~Connection() { flush_transcript(); }

  void run() {
    net::dispatch(ws_.get_executor(), [self = shared_from_this()] { self->on_run(); });
  }

 private:
  void on_run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (!ec) self->do_read();
    });
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (ec) return;  // closed or failed; the session dies with this object
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    handle(text);
    if (!closing_) do_read();
  }

  void handle(const std::string& text) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      reply_error("parse_error", std::string("malformed JSON: ") + e.what());
      return;
    }

    if (!session_) {
      try {
        const Hello hello = hello_from_json(j);
        if (hello.proto != kProtocolVersion) {
          send(encode(scene_update_to_json(
              {0, ErrorUpdate{"protocol_version", "unsupported protocol version " + std::to_string(hello.proto) +
                                                      "; server speaks " + std::to_string(kProtocolVersion)}})));
          closing_ = true;
          return;
        }
        SessionConfig cfg = shared_.cfg.session;
        if (hello.workflow) cfg.workflow = *hello.workflow;
        session_.emplace(std::move(cfg));
        send(encode(hello_ack(id_, session_->config().workflow)));
      } catch (const Error& e) {
        reply_error(std::string(to_string(e.code())), e.what());
      }
      return;
    }

    std::optional<InputEvent> event;
    try {
      event = input_event_from_json(j);
    } catch (const Error& e) {
      reply_error(std::string(to_string(e.code())), e.what());
      return;
    }
    for (const SceneUpdate& u : session_->step(*event)) send_update(u);
  }

  void reply_error(const std::string& code, const std::string& text) {
    if (session_) {
      send_update(session_->protocol_error(code, text));
    } else {
      send(encode(scene_update_to_json({0, ErrorUpdate{code, text}})));
    }
  }

  void send_update(const SceneUpdate& u) {
    std::string line = encode(scene_update_to_json(u));
    transcript_ += line;
    transcript_ += '\n';
    send(std::move(line));
  }

  void send(std::string msg) {
    outbox_.push_back(std::move(msg));
    if (outbox_.size() == 1) do_write();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_write(ec);
    });
  }

  void on_write(beast::error_code ec) {
    if (ec) return;
    outbox_.pop_front();
    if (!outbox_.empty()) {
      do_write();
    } else if (closing_) {
      ws_.async_close(websocket::close_code::policy_error, [self = shared_from_this()](beast::error_code) {});
    }
  }

  void flush_transcript() {
    if (!session_ || !shared_.cfg.log_dir) return;
    std::error_code ec;
    std::filesystem::create_directories(*shared_.cfg.log_dir, ec);
    std::ofstream out(*shared_.cfg.log_dir / ("session-" + id_ + ".jsonl"), std::ios::binary);
    out << transcript_;
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  Shared& shared_;
  std::string id_;
  std::optional<Session> session_;
  std::string transcript_;
  bool closing_ = false;
};

}  // namespace

struct Server::Impl {
  explicit Impl(ServerConfig cfg) : shared{std::move(cfg)}, acceptor(ioc) {}

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec == net::error::operation_aborted) return;
      } else {
        const std::string id = "s" + std::to_string(shared.next_id.fetch_add(1));
        std::make_shared<Connection>(std::move(socket), shared, id)->run();
      }
      do_accept();
    });
  }

  Shared shared;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::vector<std::thread> threads;
  std::mutex mu;
  std::condition_variable cv;
  bool stopped = false;
};

Server::Server(ServerConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}

Server::~Server() { stop(); }

void Server::start() {
  Impl& im = *impl_;
  beast::error_code ec;
  const auto address = net::ip::make_address(im.shared.cfg.address, ec);
  if (ec) throw Error(ErrorCode::io_error, "invalid listen address: " + ec.message());
  const tcp::endpoint endpoint(address, im.shared.cfg.port);
  im.acceptor.open(endpoint.protocol(), ec);
  if (!ec) im.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) im.acceptor.bind(endpoint, ec);
  if (!ec) im.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw Error(ErrorCode::io_error,
                "cannot bind " + im.shared.cfg.address + ":" + std::to_string(im.shared.cfg.port) + ": " + ec.message());
  }
  im.do_accept();
  const int n = std::max(1, im.shared.cfg.threads);
  for (int i = 0; i < n; ++i) im.threads.emplace_back([&im] { im.ioc.run(); });
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::stop() {
  Impl& im = *impl_;
  {
    std::lock_guard lock(im.mu);
    if (im.stopped) return;
    im.stopped = true;
  }
  net::post(im.ioc, [&im] {
    beast::error_code ec;
    im.acceptor.close(ec);
  });
  im.ioc.stop();
  for (std::thread& t : im.threads) {
    if (t.joinable()) t.join();
  }
  im.cv.notify_all();
}

void Server::wait() {
  std::unique_lock lock(impl_->mu);
  impl_->cv.wait(lock, [this] { return impl_->stopped; });
}

}  // namespace gbmr
