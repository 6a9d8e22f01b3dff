#include "quadrl/wire/client.hpp"

#include <chrono>

namespace quadrl::wire {

namespace {
std::int64_t wall_millis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}
}  // namespace

RemoteEnv::RemoteEnv(const std::string& host, std::uint16_t port, int timeout_ms, int obs_dim)
    : stream_(TcpStream::connect(host, port, timeout_ms)),
      timeout_ms_(timeout_ms),
      obs_dim_(obs_dim) {}

Message RemoteEnv::request(Message m) {
  m.seq = next_seq_;
  m.t_ms = wall_millis();
  stream_.send_all(encode_message(m));
  auto line = stream_.read_line(timeout_ms_);
  if (!line) throw TimeoutError("wire: no reply within " + std::to_string(timeout_ms_) + " ms");
  DecodeResult r = decode_message(*line);
  if (!r.ok()) throw ProtocolError("wire: bad reply: " + r.error, r.error_offset);
  if (r.message->seq != m.seq + 1)
    throw ProtocolError("wire: reply seq " + std::to_string(r.message->seq) +
                            " does not pair with request " + std::to_string(m.seq),
                        0);
  next_seq_ += 2;  // requests even, replies odd
  return std::move(*r.message);
}

EnvStep RemoteEnv::step(std::span<const double> action) {
  Message m;
  m.topic = Topic::action;
  m.payload.assign(action.begin(), action.end());
  Message reply = request(std::move(m));
  if (reply.topic != Topic::obs)
    throw ProtocolError("wire: expected quad/obs reply to quad/action", 0);
  if (static_cast<int>(reply.payload.size()) != 5 + obs_dim_)
    throw ProtocolError("wire: observation arity mismatch in quad/obs", 0);
  EnvStep out;
  out.reward = reply.payload[0];
  out.dt = reply.payload[1];
  out.x = reply.payload[2];
  out.y = reply.payload[3];
  out.yaw = reply.payload[4];
  out.obs.assign(reply.payload.begin() + 5, reply.payload.end());
  return out;
}

EnvReset RemoteEnv::reset_request(double mode, double value) {
  Message m;
  m.topic = Topic::reset;
  m.payload = {mode, value};
  Message reply = request(std::move(m));
  if (reply.topic != Topic::ack)
    throw ProtocolError("wire: expected quad/ack reply to quad/reset", 0);
  if (static_cast<int>(reply.payload.size()) != 4 + obs_dim_)
    throw ProtocolError("wire: observation arity mismatch in quad/ack", 0);
  EnvReset out;
  out.theta = reply.payload[0];
  out.x = reply.payload[1];
  out.y = reply.payload[2];
  out.yaw = reply.payload[3];
  out.obs.assign(reply.payload.begin() + 4, reply.payload.end());
  return out;
}

EnvReset RemoteEnv::reset_heading(double offset) { return reset_request(kResetHeading, offset); }

EnvReset RemoteEnv::teleport_center() { return reset_request(kResetCenter, 0.0); }

void RemoteEnv::set_noise_enabled(bool on) { reset_request(kResetNoise, on ? 1.0 : 0.0); }

}  // namespace quadrl::wire
