#include "quadrl/wire/server.hpp"

#include <cmath>
#include <cstdio>

#include "quadrl/wire/message.hpp"

namespace quadrl::wire {

namespace {
std::int64_t sim_millis(const QuadSim& sim) {
  return static_cast<std::int64_t>(std::llround(sim.state().sim_time * 1000.0));
}
}  // namespace

EnvServer::EnvServer(QuadSim& sim, const std::string& host, std::uint16_t port)
    : sim_(sim), listener_(TcpListener::bind(host, port)) {}

std::string EnvServer::make_ack_reply(std::uint64_t seq) const {
  Message reply;
  reply.topic = Topic::ack;
  reply.seq = seq;
  reply.t_ms = sim_millis(sim_);
  const RobotState& st = sim_.state();
  reply.payload = {st.heading, st.x, st.y, st.yaw};
  for (double v : sim_.observe()) reply.payload.push_back(v);
  return encode_message(reply);
}

void EnvServer::handle_session(TcpStream& stream) {
  bool have_seq = false;
  std::uint64_t last_seq = 0;
  for (;;) {
    std::optional<std::string> line;
    try {
      line = stream.read_line(-1);
    } catch (const ConnectionLostError&) {
      return;  // client went away; session over
    }
    if (!line) continue;

    DecodeResult decoded = decode_message(*line);
    if (!decoded.ok()) {
      ++stats_.decode_errors;
      std::fprintf(stderr, "[wire] decode error at byte %zu: %s\n", decoded.error_offset,
                   decoded.error.c_str());
      continue;  // malformed line; session stays alive
    }
    const Message& m = *decoded.message;
    if (have_seq && m.seq <= last_seq) {
      std::fprintf(stderr, "[wire] out-of-order seq %llu after %llu; resetting session\n",
                   static_cast<unsigned long long>(m.seq),
                   static_cast<unsigned long long>(last_seq));
      return;
    }
    have_seq = true;
    last_seq = m.seq;

    switch (m.topic) {
      case Topic::action: {
        StepOutput s = sim_.step(m.payload);
        ++stats_.steps;
        Message reply;
        reply.topic = Topic::obs;
        reply.seq = m.seq + 1;
        reply.t_ms = sim_millis(sim_);
        const RobotState& st = sim_.state();
        reply.payload = {s.reward, s.dt, st.x, st.y, st.yaw};
        reply.payload.insert(reply.payload.end(), s.obs.begin(), s.obs.end());
        stream.send_all(encode_message(reply));
        break;
      }
      case Topic::reset: {
        const double mode = m.payload[0];
        const double value = m.payload[1];
        if (mode == kResetHeading) {
          sim_.reset_heading_offset(value);
        } else if (mode == kResetCenter) {
          sim_.teleport(0.0, 0.0);
        } else {
          sim_.set_noise_enabled(value != 0.0);
        }
        ++stats_.resets;
        stream.send_all(make_ack_reply(m.seq + 1));
        break;
      }
      case Topic::obs:
      case Topic::ack:
        std::fprintf(stderr, "[wire] client sent a reply topic; resetting session\n");
        return;
    }
  }
}

void EnvServer::serve_one_session() {
  TcpStream stream = listener_.accept();
  ++stats_.sessions;
  handle_session(stream);
}

void EnvServer::serve_forever() {
  while (!stop_.load()) serve_one_session();
}

void EnvServer::stop() { stop_.store(true); }

}  // namespace quadrl::wire
