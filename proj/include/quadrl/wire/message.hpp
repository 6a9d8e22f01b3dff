#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quadrl::wire {

enum class Topic { obs, action, reset, ack };

std::string_view topic_name(Topic t);
std::optional<Topic> parse_topic(std::string_view s);

/// Reset payload modes (payload = [mode, value]).
inline constexpr double kResetHeading = 0.0;  // value = epsilon offset
inline constexpr double kResetCenter = 1.0;   // value ignored
inline constexpr double kResetNoise = 2.0;    // value = 0/1

/// One line of the protocol:
///   <topic> <seq> <t_ms> <count> <v1> ... <vcount>\n
/// Doubles are shortest-round-trip decimals, so encode/decode is bit-exact.
struct Message {
  Topic topic = Topic::obs;
  std::uint64_t seq = 0;
  std::int64_t t_ms = 0;
  std::vector<double> payload;

  bool operator==(const Message&) const = default;
};

std::string encode_message(const Message& m);

/// Total decoder: never throws. Either `message` is set or `error` names
/// the problem with the byte offset where parsing stopped.
struct DecodeResult {
  std::optional<Message> message;
  std::size_t error_offset = 0;
  std::string error;

  bool ok() const { return message.has_value(); }
};

DecodeResult decode_message(std::string_view line) noexcept;

}  // namespace quadrl::wire
