#include "quadrl/wire/message.hpp"

#include <charconv>

#include "quadrl/numfmt.hpp"

namespace quadrl::wire {

std::string_view topic_name(Topic t) {
  switch (t) {
    case Topic::obs: return "quad/obs";
    case Topic::action: return "quad/action";
    case Topic::reset: return "quad/reset";
    case Topic::ack: return "quad/ack";
  }
  return "?";
}

std::optional<Topic> parse_topic(std::string_view s) {
  if (s == "quad/obs") return Topic::obs;
  if (s == "quad/action") return Topic::action;
  if (s == "quad/reset") return Topic::reset;
  if (s == "quad/ack") return Topic::ack;
  return std::nullopt;
}

std::string encode_message(const Message& m) {
  std::string out;
  out.reserve(32 + m.payload.size() * 12);
  out += topic_name(m.topic);
  out += ' ';
  out += std::to_string(m.seq);
  out += ' ';
  out += std::to_string(m.t_ms);
  out += ' ';
  out += std::to_string(m.payload.size());
  for (double v : m.payload) {
    out += ' ';
    out += format_double(v);
  }
  out += '\n';
  return out;
}

namespace {

/// Cursor over one line; tracks the byte offset for error reports.
struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  void skip_spaces() {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }

  std::optional<std::string_view> token() {
    skip_spaces();
    if (pos >= s.size()) return std::nullopt;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] != ' ') ++pos;
    return s.substr(start, pos - start);
  }
};

DecodeResult fail(std::size_t offset, std::string why) {
  DecodeResult r;
  r.error_offset = offset;
  r.error = std::move(why);
  return r;
}

bool expected_payload_arity_ok(Topic t, std::size_t n) {
  switch (t) {
    case Topic::action: return n == 8;
    case Topic::reset: return n == 2;
    case Topic::obs: return n >= 5;  // reward, dt, x, y, yaw, observation...
    case Topic::ack: return n >= 4;  // theta, x, y, yaw, observation...
  }
  return false;
}

}  // namespace

DecodeResult decode_message(std::string_view line) noexcept {
  // Tolerate the terminating newline the framing layer may leave attached.
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
    line.remove_suffix(1);
  for (char c : line)
    if (c == '\n') return fail(0, "embedded newline");

  Cursor cur{line};
  auto topic_tok = cur.token();
  if (!topic_tok) return fail(cur.pos, "empty line");
  const auto topic = parse_topic(*topic_tok);
  if (!topic) return fail(static_cast<std::size_t>(topic_tok->data() - line.data()),
                          "unknown topic '" + std::string(*topic_tok) + "'");

  Message m;
  m.topic = *topic;

  auto parse_u64 = [&](std::uint64_t& out, const char* what) -> std::optional<DecodeResult> {
    auto tok = cur.token();
    if (!tok) return fail(cur.pos, std::string("missing ") + what);
    auto [p, ec] = std::from_chars(tok->data(), tok->data() + tok->size(), out);
    if (ec != std::errc() || p != tok->data() + tok->size())
      return fail(static_cast<std::size_t>(tok->data() - line.data()),
                  std::string("bad ") + what);
    return std::nullopt;
  };

  if (auto err = parse_u64(m.seq, "seq")) return *err;
  {
    auto tok = cur.token();
    if (!tok) return fail(cur.pos, "missing timestamp");
    std::int64_t t{};
    auto [p, ec] = std::from_chars(tok->data(), tok->data() + tok->size(), t);
    if (ec != std::errc() || p != tok->data() + tok->size())
      return fail(static_cast<std::size_t>(tok->data() - line.data()), "bad timestamp");
    m.t_ms = t;
  }

  std::uint64_t count = 0;
  if (auto err = parse_u64(count, "payload count")) return *err;
  if (count > 1 << 20) return fail(cur.pos, "payload count out of range");

  m.payload.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto tok = cur.token();
    if (!tok) return fail(cur.pos, "truncated payload");
    double v{};
    if (!parse_double(*tok, v))
      return fail(static_cast<std::size_t>(tok->data() - line.data()), "bad payload value");
    m.payload.push_back(v);
  }
  cur.skip_spaces();
  if (cur.pos != line.size()) return fail(cur.pos, "trailing bytes after payload");

  if (!expected_payload_arity_ok(m.topic, m.payload.size()))
    return fail(0, std::string("payload arity does not match topic schema for ") +
                       std::string(topic_name(m.topic)));
  if (m.topic == Topic::reset) {
    const double mode = m.payload[0];
    if (mode != kResetHeading && mode != kResetCenter && mode != kResetNoise)
      return fail(0, "unknown reset mode");
  }

  DecodeResult r;
  r.message = std::move(m);
  return r;
}

}  // namespace quadrl::wire
