#include "quadrl/trainer.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "quadrl/config.hpp"
#include "quadrl/numfmt.hpp"

namespace quadrl {

void ResetStrategy::validate() const {
  if (kind == Kind::uniform && bound <= 0)
    throw std::invalid_argument("strategy: uniform bound must be positive");
  if (kind == Kind::normal && sigma <= 0)
    throw std::invalid_argument("strategy: normal sigma must be positive");
}

std::string ResetStrategy::name() const {
  switch (kind) {
    case Kind::to_yaw: return "yaw";
    case Kind::uniform: return "uniform";
    case Kind::normal: return "normal";
  }
  return "?";
}

double ResetStrategy::sample_offset(Rng& rng) const {
  switch (kind) {
    case Kind::to_yaw: return 0.0;
    case Kind::uniform: return rng.uniform(-bound, bound);
    case Kind::normal: return rng.gaussian(mu, sigma);
  }
  return 0.0;
}

double reset_heading(const ResetStrategy& strategy, double current_yaw, Rng& rng) {
  return wrap_angle(current_yaw + strategy.sample_offset(rng));
}

void TrainConfig::validate() const {
  if (episodes < 1 || steps_per_episode < 0)
    throw std::invalid_argument("train: episode counts out of range");
  if (platform.length <= 0 || platform.width <= 0)
    throw std::invalid_argument("train: platform dimensions must be positive");
  if (eval_every < 1 || eval_episodes < 1)
    throw std::invalid_argument("train: evaluation cadence out of range");
  if (gru_hidden_dim < 1) throw std::invalid_argument("train: gru_hidden_dim out of range");
  strategy.validate();
}

Trainer::Trainer(Env& env, Td3Agent& agent, GruEncoder& encoder, ReplayBuffer& buffer,
                 const TrainConfig& cfg, Rng& agent_rng, Rng& reset_rng)
    : env_(env), agent_(agent), encoder_(encoder), buffer_(buffer), cfg_(cfg),
      agent_rng_(agent_rng), reset_rng_(reset_rng) {
  cfg_.validate();
  if (encoder_.input_dim() != env_.obs_dim())
    throw std::invalid_argument("trainer: encoder input does not match observation arity");
  if (agent_.state_dim() != encoder_.hidden_dim() + env_.obs_dim())
    throw std::invalid_argument("trainer: agent state must be encoder hidden + observation");
}

Vec Trainer::encode_state(const Vec& obs) {
  const Vec& h = encoder_.step(obs);
  Vec z;
  z.reserve(h.size() + obs.size());
  z.insert(z.end(), h.begin(), h.end());
  z.insert(z.end(), obs.begin(), obs.end());
  return z;
}

EpisodeResult Trainer::run_episode(bool explore) {
  encoder_.reset();
  const double offset = cfg_.strategy.sample_offset(reset_rng_);
  EnvReset reset = env_.reset_heading(offset);
  Vec z = encode_state(reset.obs);

  EpisodeResult res;
  double gamma_pow = 1.0;
  const double gamma = agent_.config().gamma;
  for (int t = 0; t < cfg_.steps_per_episode; ++t) {
    Vec action;
    if (explore && env_steps_ < cfg_.warmup_steps) {
      action.resize(agent_.action_dim());
      for (double& a : action) a = agent_rng_.uniform(-1.0, 1.0);
    } else {
      action = agent_.select_action(z, explore, agent_rng_);
    }

    EnvStep s = env_.step(action);
    res.episode_return += s.reward;
    res.discounted_return += gamma_pow * s.reward;
    gamma_pow *= gamma;
    ++res.steps;

    const bool out_of_bounds = !cfg_.platform.contains(s.x, s.y);
    Vec z_next = encode_state(s.obs);

    if (explore) {
      ++env_steps_;
      buffer_.push(z, action, s.reward, z_next, out_of_bounds);
      if (!stub_updates_ && env_steps_ > cfg_.warmup_steps &&
          buffer_.size() >= static_cast<std::size_t>(agent_.config().batch_size)) {
        agent_.update(buffer_, agent_rng_);
      }
    }
    z = std::move(z_next);

    if (out_of_bounds) {
      ++res.interventions;
      res.ended_by_intervention = true;
      env_.teleport_center();
      break;
    }
  }
  return res;
}

void save_policy_bundle(const std::string& path, const ObsConfig& obs, const GruEncoder& encoder,
                        const Td3Agent& agent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  BinWriter w(out);
  w.str("QRLPOLICY");
  w.u32(1);  // container version
  w.u8(obs.dt);
  w.u8(obs.delta_d);
  w.u8(obs.current);
  w.u8(obs.yaw_err);
  w.u8(obs.delta_yaw);
  w.u8(obs.roll);
  w.u8(obs.servo_pos);
  w.f64(obs.current_threshold);
  write_gru(w, encoder);
  agent.save(w);
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

PolicyBundle load_policy_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  BinReader r(in);
  if (r.str() != "QRLPOLICY") throw std::runtime_error("checkpoint: bad magic in " + path);
  const std::uint32_t version = r.u32();
  if (version != 1) throw std::runtime_error("checkpoint: unsupported version in " + path);
  ObsConfig obs;
  obs.dt = r.u8();
  obs.delta_d = r.u8();
  obs.current = r.u8();
  obs.yaw_err = r.u8();
  obs.delta_yaw = r.u8();
  obs.roll = r.u8();
  obs.servo_pos = r.u8();
  obs.current_threshold = r.f64();
  GruEncoder encoder = read_gru(r);
  Td3Agent agent = Td3Agent::load(r);
  return PolicyBundle{obs, std::move(encoder), std::move(agent)};
}

const EvalRecord& select_best(const std::vector<EvalRecord>& evals) {
  if (evals.empty()) throw std::runtime_error("select_best: no evaluation records");
  std::size_t best = 0;
  for (std::size_t i = 1; i < evals.size(); ++i)
    if (evals[i].score >= evals[best].score) best = i;  // ties go to the later checkpoint
  return evals[best];
}

void write_metrics_csv(const RunMetrics& metrics, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("metrics: cannot open " + path + " for writing");
  out << "episode,steps,return,discounted_return,interventions,eval_score\n";
  for (const EpisodeRecord& e : metrics.episodes) {
    out << e.episode << ',' << e.steps << ',' << format_double(e.episode_return) << ','
        << format_double(e.discounted_return) << ',' << e.interventions << ',';
    if (e.eval_score) out << format_double(*e.eval_score);
    out << '\n';
  }
  if (!out) throw std::runtime_error("metrics: write failed for " + path);
}

TrainOutputs train_run(const RunConfig& cfg, const std::string& out_dir, Env* env_override,
                       bool stub_updates) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);

  const std::uint64_t master = cfg.train.master_seed;
  QuadSim sim(cfg.sim, derive_seed(master, "sim"));
  LocalEnv local(sim);
  Env& env = env_override ? *env_override : static_cast<Env&>(local);

  const int obs_dim = cfg.sim.obs.dim();
  if (env.obs_dim() != obs_dim)
    throw std::runtime_error("train: environment observation arity does not match config");
  const int z_dim = cfg.train.gru_hidden_dim + obs_dim;

  GruEncoder encoder(obs_dim, cfg.train.gru_hidden_dim, derive_seed(master, "gru"));
  Td3Agent agent(z_dim, kNumServos, cfg.agent, derive_seed(master, "agent-init"));
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.agent.buffer_capacity), z_dim, kNumServos);
  Rng agent_rng(derive_seed(master, "agent"));
  Rng reset_rng(derive_seed(master, "reset"));

  Trainer trainer(env, agent, encoder, buffer, cfg.train, agent_rng, reset_rng);
  trainer.set_stub_updates(stub_updates);

  TrainOutputs out;
  out.metrics.master_seed = master;
  out.metrics.config_hash = config_hash(cfg);

  for (int ep = 1; ep <= cfg.train.episodes; ++ep) {
    EpisodeResult r = trainer.run_episode(true);
    EpisodeRecord rec;
    rec.episode = ep;
    rec.steps = r.steps;
    rec.episode_return = r.episode_return;
    rec.discounted_return = r.discounted_return;
    rec.interventions = r.interventions;
    out.metrics.total_env_steps += r.steps;
    out.metrics.total_interventions += r.interventions;

    if (ep % cfg.train.eval_every == 0) {
      env.set_noise_enabled(false);
      double score_sum = 0.0;
      for (int k = 0; k < cfg.train.eval_episodes; ++k)
        score_sum += trainer.run_episode(false).episode_return;
      env.set_noise_enabled(true);
      const double score = score_sum / cfg.train.eval_episodes;
      rec.eval_score = score;

      char name[64];
      std::snprintf(name, sizeof(name), "ckpt_ep%06d.qrl", ep);
      const std::string ckpt_path = (fs::path(out_dir) / name).string();
      save_policy_bundle(ckpt_path, cfg.sim.obs, encoder, agent);
      out.metrics.evals.push_back(EvalRecord{ep, score, ckpt_path});
    }
    out.metrics.episodes.push_back(std::move(rec));
  }

  out.metrics.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out.metrics_csv_path = (fs::path(out_dir) / "metrics.csv").string();
  write_metrics_csv(out.metrics, out.metrics_csv_path);

  {
    std::ofstream info((fs::path(out_dir) / "run_info.txt").string());
    info << "seed=" << master << '\n'
         << "config_hash=" << out.metrics.config_hash << '\n'
         << "strategy=" << cfg.train.strategy.name() << '\n'
         << "total_env_steps=" << out.metrics.total_env_steps << '\n'
         << "total_interventions=" << out.metrics.total_interventions << '\n'
         << "wall_clock_seconds=" << format_double(out.metrics.wall_clock_seconds) << '\n';
  }

  if (!out.metrics.evals.empty()) out.best_checkpoint = select_best(out.metrics.evals).checkpoint_path;
  return out;
}

}  // namespace quadrl
