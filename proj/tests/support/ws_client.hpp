#pragma once

// Minimal synchronous WebSocket client for driving a live server in tests.

#include <string>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace gbmr::testing {

class WsClient {
 public:
  explicit WsClient(unsigned short port) : resolver_(ioc_), ws_(ioc_) {
    const auto results = resolver_.resolve("127.0.0.1", std::to_string(port));
    boost::asio::connect(ws_.next_layer(), results.begin(), results.end());
    ws_.handshake("127.0.0.1:" + std::to_string(port), "/");
    ws_.text(true);
  }

  ~WsClient() {
    boost::beast::error_code ec;
    if (ws_.is_open()) ws_.close(boost::beast::websocket::close_code::normal, ec);
  }

  void send(const std::string& text) { ws_.write(boost::asio::buffer(text)); }

  std::string read() {
    boost::beast::flat_buffer buffer;
    ws_.read(buffer);
    return boost::beast::buffers_to_string(buffer.data());
  }

  /// Reads one message, or returns the error the read failed with.
  boost::beast::error_code try_read(std::string& out) {
    boost::beast::flat_buffer buffer;
    boost::beast::error_code ec;
    ws_.read(buffer, ec);
    if (!ec) out = boost::beast::buffers_to_string(buffer.data());
    return ec;
  }

  void close() { ws_.close(boost::beast::websocket::close_code::normal); }

 private:
  boost::asio::io_context ioc_;
  boost::asio::ip::tcp::resolver resolver_;
  boost::beast::websocket::stream<boost::asio::ip::tcp::socket> ws_;
};

}  // namespace gbmr::testing
