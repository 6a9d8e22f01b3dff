#include "quadrl/wire/socket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace quadrl::wire {

namespace {

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw WireError("wire: bad IPv4 address '" + host + "'");
  return addr;
}

[[noreturn]] void throw_errno(const std::string& what) {
  throw WireError(what + ": " + std::strerror(errno));
}

}  // namespace

TcpStream::~TcpStream() { close(); }

TcpStream::TcpStream(TcpStream&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), buffer_(std::move(other.buffer_)) {}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
    buffer_ = std::move(other.buffer_);
  }
  return *this;
}

void TcpStream::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port, int timeout_ms) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw_errno("wire: socket");
  TcpStream stream(fd);
  sockaddr_in addr = make_addr(host, port);
  (void)timeout_ms;  // connect() is allowed to use the OS default here
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw ConnectionLostError("wire: connect to " + host + ":" + std::to_string(port) +
                              " failed: " + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return stream;
}

void TcpStream::send_all(std::string_view bytes) {
  if (fd_ < 0) throw ConnectionLostError("wire: send on closed stream");
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionLostError(std::string("wire: send failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> TcpStream::read_line(int timeout_ms) {
  if (fd_ < 0) throw ConnectionLostError("wire: read on closed stream");
  for (;;) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    if (timeout_ms >= 0) {
      pollfd p{fd_, POLLIN, 0};
      const int pr = ::poll(&p, 1, timeout_ms);
      if (pr == 0) return std::nullopt;
      if (pr < 0) {
        if (errno == EINTR) continue;
        throw_errno("wire: poll");
      }
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n == 0) throw ConnectionLostError("wire: peer closed the connection");
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionLostError(std::string("wire: recv failed: ") + std::strerror(errno));
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

TcpListener::~TcpListener() { close(); }

TcpListener::TcpListener(TcpListener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), port_(std::exchange(other.port_, 0)) {}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
    port_ = std::exchange(other.port_, 0);
  }
  return *this;
}

void TcpListener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener TcpListener::bind(const std::string& host, std::uint16_t port) {
  TcpListener l;
  l.fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (l.fd_ < 0) throw_errno("wire: socket");
  const int one = 1;
  ::setsockopt(l.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = make_addr(host, port);
  if (::bind(l.fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw_errno("wire: bind " + host + ":" + std::to_string(port));
  if (::listen(l.fd_, 1) != 0) throw_errno("wire: listen");
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  if (::getsockname(l.fd_, reinterpret_cast<sockaddr*>(&bound), &len) != 0)
    throw_errno("wire: getsockname");
  l.port_ = ntohs(bound.sin_port);
  return l;
}

TcpStream TcpListener::accept() {
  if (fd_ < 0) throw WireError("wire: accept on closed listener");
  for (;;) {
    const int cfd = ::accept(fd_, nullptr, nullptr);
    if (cfd >= 0) {
      const int one = 1;
      ::setsockopt(cfd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return TcpStream(cfd);
    }
    if (errno == EINTR) continue;
    throw_errno("wire: accept");
  }
}

}  // namespace quadrl::wire
