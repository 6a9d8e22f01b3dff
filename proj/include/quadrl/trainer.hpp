#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadrl/env.hpp"
#include "quadrl/gru.hpp"
#include "quadrl/replay_buffer.hpp"
#include "quadrl/rng.hpp"
#include "quadrl/td3.hpp"

namespace quadrl {

struct RunConfig;  // config.hpp

/// How the commanded heading moves at episode resets.
struct ResetStrategy {
  enum class Kind { to_yaw, uniform, normal };

  Kind kind = Kind::normal;
  double bound = M_PI / 4.0;  // uniform: epsilon ~ U[-bound, +bound]
  double mu = 0.0;            // normal: epsilon ~ N(mu, sigma^2), unclipped
  double sigma = M_PI / 4.0;

  void validate() const;
  std::string name() const;

  /// The offset epsilon added to the current yaw. to_yaw draws nothing.
  double sample_offset(Rng& rng) const;
};

/// theta = wrap(current_yaw + epsilon) per the strategy.
double reset_heading(const ResetStrategy& strategy, double current_yaw, Rng& rng);

/// Training platform rectangle, axis-aligned and centered at the origin.
struct Platform {
  double length = 3.5;
  double width = 2.5;

  bool contains(double x, double y) const {
    return std::abs(x) <= length * 0.5 && std::abs(y) <= width * 0.5;
  }
};

struct TrainConfig {
  int episodes = 600;
  int steps_per_episode = 500;
  Platform platform;
  int eval_every = 50;
  int eval_episodes = 3;
  int warmup_steps = 1000;
  std::uint64_t master_seed = 1;
  ResetStrategy strategy;
  int gru_hidden_dim = 32;

  void validate() const;
};

struct EpisodeRecord {
  int episode = 0;
  int steps = 0;
  double episode_return = 0.0;
  double discounted_return = 0.0;
  int interventions = 0;
  std::optional<double> eval_score;
};

struct EvalRecord {
  int episode = 0;
  double score = 0.0;
  std::string checkpoint_path;
};

struct RunMetrics {
  std::vector<EpisodeRecord> episodes;
  std::vector<EvalRecord> evals;
  long total_env_steps = 0;
  long total_interventions = 0;
  std::uint64_t master_seed = 0;
  std::string config_hash;
  double wall_clock_seconds = 0.0;  // never written into metrics.csv
};

struct EpisodeResult {
  double episode_return = 0.0;
  double discounted_return = 0.0;
  int steps = 0;
  int interventions = 0;
  bool ended_by_intervention = false;
};

/// Episode lifecycle around one Env: heading resets, GRU re-encoding,
/// bounds interventions, warmup actions, one agent update per exploring
/// step. The robot pose is never reset; only the heading and the encoder
/// hidden state are.
class Trainer {
 public:
  Trainer(Env& env, Td3Agent& agent, GruEncoder& encoder, ReplayBuffer& buffer,
          const TrainConfig& cfg, Rng& agent_rng, Rng& reset_rng);

  EpisodeResult run_episode(bool explore);

  long env_steps() const { return env_steps_; }
  void set_stub_updates(bool on) { stub_updates_ = on; }

 private:
  Vec encode_state(const Vec& obs);

  Env& env_;
  Td3Agent& agent_;
  GruEncoder& encoder_;
  ReplayBuffer& buffer_;
  TrainConfig cfg_;
  Rng& agent_rng_;
  Rng& reset_rng_;
  long env_steps_ = 0;
  bool stub_updates_ = false;
};

/// Everything evaluate needs to run a trained policy: observation layout,
/// the fixed encoder, and the full agent. One versioned container.
struct PolicyBundle {
  ObsConfig obs;
  GruEncoder encoder;
  Td3Agent agent;
};

void save_policy_bundle(const std::string& path, const ObsConfig& obs, const GruEncoder& encoder,
                        const Td3Agent& agent);
PolicyBundle load_policy_bundle(const std::string& path);

/// Checkpoint with the maximal mean eval score; ties go to the later one.
/// Throws when no evaluations exist.
const EvalRecord& select_best(const std::vector<EvalRecord>& evals);

struct TrainOutputs {
  RunMetrics metrics;
  std::string metrics_csv_path;
  std::string best_checkpoint;
};

/// Full training run: builds sim, encoder, agent and buffer from the run
/// config, loops episodes with periodic non-exploration evaluations,
/// writes metrics.csv plus checkpoints under out_dir. env_override swaps
/// the in-process simulator for another transport. stub_updates skips all
/// gradient math (step-budget accounting runs).
TrainOutputs train_run(const RunConfig& cfg, const std::string& out_dir,
                       Env* env_override = nullptr, bool stub_updates = false);

void write_metrics_csv(const RunMetrics& metrics, const std::string& path);

}  // namespace quadrl
