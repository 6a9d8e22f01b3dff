#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace quadrl {

/// Shortest decimal that round-trips the exact double. Used for every
/// number that lands in a CSV or wire message so emitted bytes are a pure
/// function of the values.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace quadrl
