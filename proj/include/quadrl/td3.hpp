#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quadrl/adam.hpp"
#include "quadrl/checkpoint.hpp"
#include "quadrl/mlp.hpp"
#include "quadrl/replay_buffer.hpp"
#include "quadrl/rng.hpp"

namespace quadrl {

struct Td3Config {
  double gamma = 0.99;
  double tau = 0.005;
  int policy_delay = 2;
  double target_noise_sigma = 0.2;
  double target_noise_clip = 0.5;
  double exploration_sigma = 0.1;
  int batch_size = 256;
  int buffer_capacity = 300000;  // one full 600x500 run
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  std::vector<int> hidden = {256, 256};
};

struct UpdateReport {
  double critic1_loss = 0.0;
  double critic2_loss = 0.0;
  bool actor_updated = false;
  double actor_loss = 0.0;
};

/// theta_target <- tau * theta + (1 - tau) * theta_target
void polyak_update(Mlp& target, const Mlp& online, double tau);

/// Twin-delayed deterministic policy-gradient learner over encoded states.
/// Deterministic tanh actor, twin identity-output critics, Polyak-averaged
/// targets, delayed actor updates, target-policy smoothing.
class Td3Agent {
 public:
  Td3Agent(int state_dim, int action_dim, const Td3Config& cfg, std::uint64_t seed);

  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  const Td3Config& config() const { return cfg_; }
  long update_count() const { return update_count_; }

  /// Deterministic mode returns actor(z); explore mode adds independent
  /// Gaussian noise of exploration_sigma per component then clamps to [-1, 1].
  Vec select_action(std::span<const double> z, bool explore, Rng& rng) const;

  /// y_i = r_i + gamma * (1 - done_i) * min(q1t, q2t) evaluated at the
  /// smoothed target action a' = clamp(actor_target(z') + clamp(eps, +-clip), -1, 1).
  void compute_critic_target(const TransitionBatch& batch, Rng& rng, Vec& y) const;

  /// One regression step for both critics; every policy_delay-th call also
  /// one actor ascent step on critic1 and a Polyak update of all targets.
  /// Requires buffer.size() >= batch_size.
  UpdateReport update(ReplayBuffer& buffer, Rng& rng);

  const Mlp& actor() const { return actor_; }
  const Mlp& critic1() const { return critic1_; }
  const Mlp& critic2() const { return critic2_; }
  const Mlp& actor_target() const { return actor_target_; }
  const Mlp& critic1_target() const { return critic1_target_; }
  const Mlp& critic2_target() const { return critic2_target_; }

  // Direct network access; tests pin weights through these.
  Mlp& mutable_actor() { return actor_; }
  Mlp& mutable_critic1() { return critic1_; }
  Mlp& mutable_critic2() { return critic2_; }
  Mlp& mutable_actor_target() { return actor_target_; }
  Mlp& mutable_critic1_target() { return critic1_target_; }
  Mlp& mutable_critic2_target() { return critic2_target_; }

  /// FNV-1a over all online and target parameter bytes.
  std::uint64_t parameter_checksum() const;

  void save(BinWriter& w) const;
  static Td3Agent load(BinReader& r);

 private:
  Td3Agent() = default;

  Td3Config cfg_;
  int state_dim_ = 0;
  int action_dim_ = 0;
  Mlp actor_, critic1_, critic2_;
  Mlp actor_target_, critic1_target_, critic2_target_;
  AdamOptimizer actor_opt_, critic1_opt_, critic2_opt_;
  long update_count_ = 0;

  // Scratch reused across updates so the training loop does not allocate.
  mutable MlpWorkspace ws_actor_, ws_c1_, ws_c2_;
  mutable MlpWorkspace ws_tgt_actor_, ws_tgt_c1_, ws_tgt_c2_;
  mutable TransitionBatch batch_;
  mutable Matrix critic_in_, smoothed_next_action_, cotangent_, input_grad_;
  mutable Vec target_y_;
  MlpGrads actor_grads_, c1_grads_, c2_grads_;

  void init_optimizers();
};

}  // namespace quadrl
