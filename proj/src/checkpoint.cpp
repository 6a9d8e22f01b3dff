#include "quadrl/checkpoint.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace quadrl {

void BinWriter::u8(std::uint8_t v) { out_.write(reinterpret_cast<const char*>(&v), 1); }

void BinWriter::u32(std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out_.write(b, 4);
}

void BinWriter::u64(std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out_.write(b, 8);
}

void BinWriter::i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

void BinWriter::f64(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  u64(bits);
}

void BinWriter::doubles(std::span<const double> v) {
  u64(v.size());
  for (double x : v) f64(x);
}

void BinWriter::str(const std::string& s) {
  u64(s.size());
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void BinReader::read_bytes(void* dst, std::size_t n) {
  in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n)
    throw std::runtime_error("checkpoint: truncated stream");
}

std::uint8_t BinReader::u8() {
  std::uint8_t v;
  read_bytes(&v, 1);
  return v;
}

std::uint32_t BinReader::u32() {
  unsigned char b[4];
  read_bytes(b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t BinReader::u64() {
  unsigned char b[8];
  read_bytes(b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::int64_t BinReader::i64() { return static_cast<std::int64_t>(u64()); }

double BinReader::f64() {
  const std::uint64_t bits = u64();
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

Vec BinReader::doubles() {
  const std::uint64_t n = u64();
  Vec v(n);
  for (std::uint64_t i = 0; i < n; ++i) v[i] = f64();
  return v;
}

std::string BinReader::str() {
  const std::uint64_t n = u64();
  std::string s(n, '\0');
  read_bytes(s.data(), n);
  return s;
}

void write_mlp(BinWriter& w, const Mlp& net) {
  w.u32(static_cast<std::uint32_t>(net.layer_sizes().size()));
  for (int s : net.layer_sizes()) w.u32(static_cast<std::uint32_t>(s));
  w.u8(net.output_activation() == OutputActivation::tanh_clamp ? 1 : 0);
  for (int k = 0; k < net.layer_count(); ++k) {
    w.doubles(net.weights()[k].data);
    w.doubles(net.biases()[k]);
  }
}

Mlp read_mlp(BinReader& r) {
  const std::uint32_t n = r.u32();
  std::vector<int> sizes(n);
  for (auto& s : sizes) s = static_cast<int>(r.u32());
  const OutputActivation act =
      r.u8() == 1 ? OutputActivation::tanh_clamp : OutputActivation::identity;
  Mlp net = Mlp::zeros(sizes, act);
  for (int k = 0; k < net.layer_count(); ++k) {
    Vec wdata = r.doubles();
    Vec bdata = r.doubles();
    if (wdata.size() != net.weights()[k].size() || bdata.size() != net.biases()[k].size())
      throw std::runtime_error("checkpoint: mlp layer size mismatch");
    net.weights()[k].data = std::move(wdata);
    net.biases()[k] = std::move(bdata);
  }
  return net;
}

void write_gru(BinWriter& w, const GruEncoder& enc) {
  if (!enc.seeded())
    throw std::invalid_argument("checkpoint: only seed-initialized encoders are persisted");
  w.u32(static_cast<std::uint32_t>(enc.input_dim()));
  w.u32(static_cast<std::uint32_t>(enc.hidden_dim()));
  w.u64(enc.seed());
  for (const Vec* arr : enc.weight_arrays()) w.doubles(*arr);
}

GruEncoder read_gru(BinReader& r) {
  const int input_dim = static_cast<int>(r.u32());
  const int hidden_dim = static_cast<int>(r.u32());
  const std::uint64_t seed = r.u64();
  GruEncoder enc(input_dim, hidden_dim, seed);
  for (const Vec* arr : enc.weight_arrays()) {
    Vec stored = r.doubles();
    if (stored.size() != arr->size() ||
        std::memcmp(stored.data(), arr->data(), stored.size() * sizeof(double)) != 0)
      throw std::runtime_error("checkpoint: gru weights do not match their seed");
  }
  return enc;
}

void write_adam(BinWriter& w, const AdamConfig& cfg, const AdamState& st) {
  w.f64(cfg.learning_rate);
  w.f64(cfg.beta1);
  w.f64(cfg.beta2);
  w.f64(cfg.epsilon);
  w.i64(st.step_count);
  w.u32(static_cast<std::uint32_t>(st.first_moment.size()));
  for (std::size_t t = 0; t < st.first_moment.size(); ++t) {
    w.doubles(st.first_moment[t]);
    w.doubles(st.second_moment[t]);
  }
}

void read_adam(BinReader& r, AdamConfig& cfg, AdamState& st) {
  cfg.learning_rate = r.f64();
  cfg.beta1 = r.f64();
  cfg.beta2 = r.f64();
  cfg.epsilon = r.f64();
  st.step_count = r.i64();
  const std::uint32_t n = r.u32();
  st.first_moment.resize(n);
  st.second_moment.resize(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    st.first_moment[t] = r.doubles();
    st.second_moment[t] = r.doubles();
  }
}

}  // namespace quadrl
