#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "gbmr/session.hpp"

namespace gbmr {

struct ServerConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  ///< 0 picks an ephemeral port
  SessionConfig session;    ///< template for every connection; hello may override the workflow
  std::optional<std::filesystem::path> log_dir;  ///< per-session transcripts land here
  int threads = 2;
};

/// WebSocket front end: one Session per connection, InputEvents in, SceneUpdates
/// out, one JSON message per text frame. Each connection is served on its own
/// strand, so a session's events are processed strictly in order.
class Server {
 public:
  explicit Server(ServerConfig cfg);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving on background threads. Throws io_error when the
  /// port cannot be bound.
  void start();
  unsigned short port() const;
  void stop();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gbmr
