#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "quadrl/adam.hpp"
#include "quadrl/gru.hpp"
#include "quadrl/mlp.hpp"

namespace quadrl {

/// Little-endian binary writer. Doubles go out as raw IEEE-754 bytes so
/// round-trips are byte-exact.
class BinWriter {
 public:
  explicit BinWriter(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v);
  void f64(double v);
  void doubles(std::span<const double> v);  // count-prefixed
  void str(const std::string& s);           // count-prefixed bytes

 private:
  std::ostream& out_;
};

class BinReader {
 public:
  explicit BinReader(std::istream& in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64();
  double f64();
  Vec doubles();
  std::string str();

 private:
  void read_bytes(void* dst, std::size_t n);
  std::istream& in_;
};

void write_mlp(BinWriter& w, const Mlp& net);
Mlp read_mlp(BinReader& r);

/// Stores dims, seed and the weight arrays. Loading regenerates the weights
/// from the seed and verifies them byte-for-byte against the stored copies.
void write_gru(BinWriter& w, const GruEncoder& enc);
GruEncoder read_gru(BinReader& r);

void write_adam(BinWriter& w, const AdamConfig& cfg, const AdamState& st);
void read_adam(BinReader& r, AdamConfig& cfg, AdamState& st);

}  // namespace quadrl
