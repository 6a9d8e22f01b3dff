#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace quadrl::wire {

struct WireError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reply did not arrive in time; the trainer can checkpoint and halt.
struct TimeoutError : WireError {
  using WireError::WireError;
};

/// Peer vanished (EOF, reset). Distinct from a slow peer.
struct ConnectionLostError : WireError {
  using WireError::WireError;
};

/// Line arrived but did not parse; carries the codec's byte offset.
struct ProtocolError : WireError {
  ProtocolError(const std::string& what, std::size_t offset)
      : WireError(what), byte_offset(offset) {}
  std::size_t byte_offset = 0;
};

/// Blocking TCP stream with buffered newline framing.
class TcpStream {
 public:
  TcpStream() = default;
  explicit TcpStream(int fd) : fd_(fd) {}
  ~TcpStream();
  TcpStream(TcpStream&& other) noexcept;
  TcpStream& operator=(TcpStream&& other) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  static TcpStream connect(const std::string& host, std::uint16_t port, int timeout_ms);

  bool valid() const { return fd_ >= 0; }
  void close();

  /// Whole-buffer write; throws ConnectionLostError on a broken pipe.
  void send_all(std::string_view bytes);

  /// One newline-terminated line without the terminator. nullopt on
  /// timeout (timeout_ms >= 0); throws ConnectionLostError at EOF.
  std::optional<std::string> read_line(int timeout_ms);

 private:
  int fd_ = -1;
  std::string buffer_;
};

class TcpListener {
 public:
  TcpListener() = default;
  ~TcpListener();
  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  /// Binds and listens; port 0 picks an ephemeral port.
  static TcpListener bind(const std::string& host, std::uint16_t port);

  std::uint16_t port() const { return port_; }
  void close();

  /// Blocks for one client.
  TcpStream accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace quadrl::wire
