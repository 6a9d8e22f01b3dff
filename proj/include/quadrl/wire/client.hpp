#pragma once

#include <cstdint>
#include <string>

#include "quadrl/env.hpp"
#include "quadrl/wire/message.hpp"
#include "quadrl/wire/socket.hpp"

namespace quadrl::wire {

/// Env implementation that drives a remote simulator over the line
/// protocol. Blocking request/reply with a per-call timeout; timeouts,
/// decode problems and connection loss surface as distinct exceptions.
class RemoteEnv : public Env {
 public:
  RemoteEnv(const std::string& host, std::uint16_t port, int timeout_ms, int obs_dim);

  EnvStep step(std::span<const double> action) override;
  EnvReset reset_heading(double offset) override;
  EnvReset teleport_center() override;
  void set_noise_enabled(bool on) override;
  int obs_dim() const override { return obs_dim_; }

 private:
  Message request(Message m);
  EnvReset reset_request(double mode, double value);

  TcpStream stream_;
  int timeout_ms_;
  int obs_dim_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace quadrl::wire
