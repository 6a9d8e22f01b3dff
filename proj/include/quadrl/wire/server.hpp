#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "quadrl/sim.hpp"
#include "quadrl/wire/socket.hpp"

namespace quadrl::wire {

struct ServerStats {
  std::uint64_t steps = 0;
  std::uint64_t resets = 0;
  std::uint64_t decode_errors = 0;
  std::uint64_t sessions = 0;
};

/// Serves one simulator to one trainer session at a time. Strict
/// request/reply: quad/action -> quad/obs, quad/reset -> quad/ack. Request
/// sequence numbers must increase; a regression resets the session.
class EnvServer {
 public:
  EnvServer(QuadSim& sim, const std::string& host, std::uint16_t port);

  std::uint16_t port() const { return listener_.port(); }
  const ServerStats& stats() const { return stats_; }

  /// Accepts one client and serves it until disconnect or seq violation.
  void serve_one_session();

  /// serve_one_session in a loop until stop() is called from elsewhere.
  void serve_forever();
  void stop();

 private:
  void handle_session(TcpStream& stream);
  std::string make_ack_reply(std::uint64_t seq) const;

  QuadSim& sim_;
  TcpListener listener_;
  ServerStats stats_;
  std::atomic<bool> stop_{false};
};

}  // namespace quadrl::wire
