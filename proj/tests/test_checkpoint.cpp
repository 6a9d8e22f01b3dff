#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "quadrl/checkpoint.hpp"
#include "quadrl/td3.hpp"
#include "quadrl/trainer.hpp"

using namespace quadrl;

namespace {

bool mlp_bitwise_equal(const Mlp& a, const Mlp& b) {
  if (!a.same_shape(b)) return false;
  auto va = a.parameter_views();
  auto vb = b.parameter_views();
  for (std::size_t k = 0; k < va.size(); ++k)
    if (std::memcmp(va[k].data(), vb[k].data(), va[k].size() * sizeof(double)) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("mlp checkpoint round-trips byte-exactly") {
  Rng rng(404);
  Mlp net({4, 9, 2}, OutputActivation::tanh_clamp, rng);
  std::stringstream buf;
  BinWriter w(buf);
  write_mlp(w, net);
  BinReader r(buf);
  Mlp back = read_mlp(r);
  CHECK(mlp_bitwise_equal(net, back));
}

TEST_CASE("gru checkpoint verifies weights against their seed") {
  GruEncoder enc(5, 7, 31337);
  std::stringstream buf;
  BinWriter w(buf);
  write_gru(w, enc);
  BinReader r(buf);
  GruEncoder back = read_gru(r);
  CHECK(back.input_dim() == 5);
  CHECK(back.hidden_dim() == 7);
  CHECK(back.seed() == 31337);
  auto a = enc.weight_arrays();
  auto b = back.weight_arrays();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(*a[i] == *b[i]);
}

TEST_CASE("gru checkpoint detects tampered weight bytes") {
  GruEncoder enc(3, 4, 9);
  std::stringstream buf;
  BinWriter w(buf);
  write_gru(w, enc);
  std::string bytes = buf.str();
  bytes[bytes.size() / 2] ^= 0x40;  // flip a bit inside some weight
  std::stringstream corrupted(bytes);
  BinReader r(corrupted);
  CHECK_THROWS(read_gru(r));
}

TEST_CASE("truncated checkpoint streams fail loudly") {
  Rng rng(2);
  Mlp net({3, 3}, OutputActivation::identity, rng);
  std::stringstream buf;
  BinWriter w(buf);
  write_mlp(w, net);
  std::string bytes = buf.str();
  std::stringstream half(bytes.substr(0, bytes.size() / 2));
  BinReader r(half);
  CHECK_THROWS(read_mlp(r));
}

TEST_CASE("adam state round-trips including moments and step count") {
  AdamConfig cfg;
  cfg.learning_rate = 0.001953125;  // exactly representable
  AdamState st;
  st.step_count = 41;
  st.first_moment = {Vec{0.1, -0.25}, Vec{3.0}};
  st.second_moment = {Vec{0.5, 0.125}, Vec{7.0}};
  std::stringstream buf;
  BinWriter w(buf);
  write_adam(w, cfg, st);
  BinReader r(buf);
  AdamConfig cfg2;
  AdamState st2;
  read_adam(r, cfg2, st2);
  CHECK(cfg2.learning_rate == cfg.learning_rate);
  CHECK(st2.step_count == 41);
  CHECK(st2.first_moment == st.first_moment);
  CHECK(st2.second_moment == st.second_moment);
}

TEST_CASE("agent checkpoint restores every network and optimizer") {
  Td3Config cfg;
  cfg.hidden = {8, 8};
  cfg.batch_size = 4;
  cfg.buffer_capacity = 16;
  Td3Agent agent(6, 2, cfg, 555);

  // A couple of updates so moments and counters are non-trivial.
  ReplayBuffer buf(16, 6, 2);
  Rng rng(1);
  for (int i = 0; i < 8; ++i) {
    Vec z(6), a(2);
    for (double& v : z) v = rng.uniform(-1.0, 1.0);
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    Vec zn = z;
    buf.push(z, a, rng.uniform(-1.0, 1.0), zn, false);
  }
  agent.update(buf, rng);
  agent.update(buf, rng);

  std::stringstream stream;
  BinWriter w(stream);
  agent.save(w);
  BinReader r(stream);
  Td3Agent back = Td3Agent::load(r);

  CHECK(back.update_count() == agent.update_count());
  CHECK(back.parameter_checksum() == agent.parameter_checksum());
  CHECK(back.config().batch_size == cfg.batch_size);

  // The restored agent must continue identically to the original.
  Rng ra(99), rb(99);
  UpdateReport ua = agent.update(buf, ra);
  UpdateReport ub = back.update(buf, rb);
  CHECK(ua.critic1_loss == ub.critic1_loss);
  CHECK(ua.critic2_loss == ub.critic2_loss);
  CHECK(agent.parameter_checksum() == back.parameter_checksum());
}

TEST_CASE("policy bundle round-trips through a file") {
  const std::string path = (std::filesystem::temp_directory_path() / "quadrl_test_policy.qrl").string();
  ObsConfig obs;
  obs.current = false;
  GruEncoder enc(obs.dim(), 8, 777);
  Td3Config tc;
  tc.hidden = {8, 8};
  Td3Agent agent(8 + obs.dim(), 8, tc, 1);
  save_policy_bundle(path, obs, enc, agent);

  PolicyBundle bundle = load_policy_bundle(path);
  CHECK(bundle.obs.current == false);
  CHECK(bundle.obs.dim() == obs.dim());
  CHECK(bundle.encoder.seed() == 777);
  CHECK(bundle.agent.parameter_checksum() == agent.parameter_checksum());
  std::filesystem::remove(path);
}
