#include "quadrl/td3.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace quadrl {

namespace {

std::vector<int> actor_sizes(int state_dim, int action_dim, const std::vector<int>& hidden) {
  std::vector<int> s{state_dim};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(action_dim);
  return s;
}

std::vector<int> critic_sizes(int state_dim, int action_dim, const std::vector<int>& hidden) {
  std::vector<int> s{state_dim + action_dim};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(1);
  return s;
}

/// X = [Z | A] row-wise.
void concat_columns(const Matrix& Z, const Matrix& A, Matrix& X) {
  X.rows = Z.rows;
  X.cols = Z.cols + A.cols;
  X.data.resize(static_cast<std::size_t>(X.rows) * X.cols);
  for (int i = 0; i < Z.rows; ++i) {
    double* xi = X.row(i);
    std::memcpy(xi, Z.row(i), Z.cols * sizeof(double));
    std::memcpy(xi + Z.cols, A.row(i), A.cols * sizeof(double));
  }
}

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  if (!target.same_shape(online)) throw std::invalid_argument("polyak: shape mismatch");
  auto t = target.parameter_views();
  auto o = online.parameter_views();
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t i = 0; i < t[k].size(); ++i)
      t[k][i] = tau * o[k][i] + (1.0 - tau) * t[k][i];
}

Td3Agent::Td3Agent(int state_dim, int action_dim, const Td3Config& cfg, std::uint64_t seed)
    : cfg_(cfg), state_dim_(state_dim), action_dim_(action_dim) {
  if (state_dim <= 0 || action_dim <= 0)
    throw std::invalid_argument("td3: dimensions must be positive");
  Rng init(seed);
  actor_ = Mlp(actor_sizes(state_dim, action_dim, cfg.hidden), OutputActivation::tanh_clamp, init);
  critic1_ = Mlp(critic_sizes(state_dim, action_dim, cfg.hidden), OutputActivation::identity, init);
  critic2_ = Mlp(critic_sizes(state_dim, action_dim, cfg.hidden), OutputActivation::identity, init);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  init_optimizers();
  actor_grads_ = actor_.make_grads();
  c1_grads_ = critic1_.make_grads();
  c2_grads_ = critic2_.make_grads();
}

void Td3Agent::init_optimizers() {
  AdamConfig actor_cfg{cfg_.actor_lr};
  AdamConfig critic_cfg{cfg_.critic_lr};
  auto ap = std::as_const(actor_).parameter_views();
  auto c1p = std::as_const(critic1_).parameter_views();
  auto c2p = std::as_const(critic2_).parameter_views();
  actor_opt_ = AdamOptimizer(ap, actor_cfg);
  critic1_opt_ = AdamOptimizer(c1p, critic_cfg);
  critic2_opt_ = AdamOptimizer(c2p, critic_cfg);
}

Vec Td3Agent::select_action(std::span<const double> z, bool explore, Rng& rng) const {
  Vec a = actor_.forward(z);
  if (explore) {
    for (double& v : a) v = clamp1(v + rng.gaussian(0.0, cfg_.exploration_sigma));
  }
  return a;
}

void Td3Agent::compute_critic_target(const TransitionBatch& batch, Rng& rng, Vec& y) const {
  const int n = batch.size();
  const Matrix& next_action = actor_target_.forward_batch(batch.z_next, ws_tgt_actor_);
  smoothed_next_action_ = next_action;
  for (double& v : smoothed_next_action_.data) {
    const double eps = std::clamp(rng.gaussian(0.0, cfg_.target_noise_sigma),
                                  -cfg_.target_noise_clip, cfg_.target_noise_clip);
    v = clamp1(v + eps);
  }
  concat_columns(batch.z_next, smoothed_next_action_, critic_in_);
  const Matrix& q1 = critic1_target_.forward_batch(critic_in_, ws_tgt_c1_);
  const Matrix& q2 = critic2_target_.forward_batch(critic_in_, ws_tgt_c2_);
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double q_min = std::min(q1.data[i], q2.data[i]);
    y[i] = batch.r[i] + cfg_.gamma * (batch.done[i] ? 0.0 : 1.0) * q_min;
  }
}

UpdateReport Td3Agent::update(ReplayBuffer& buffer, Rng& rng) {
  if (buffer.size() < static_cast<std::size_t>(cfg_.batch_size))
    throw std::runtime_error("td3: buffer smaller than batch size");
  UpdateReport report;
  const int n = cfg_.batch_size;
  buffer.sample(n, rng, batch_);
  compute_critic_target(batch_, rng, target_y_);

  concat_columns(batch_.z, batch_.a, critic_in_);
  auto critic_step = [&](Mlp& critic, MlpWorkspace& ws, MlpGrads& grads, AdamOptimizer& opt,
                         double& loss_out) {
    const Matrix& q = critic.forward_batch(critic_in_, ws);
    cotangent_.resize(n, 1);
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double err = q.data[i] - target_y_[i];
      loss += err * err;
      cotangent_.data[i] = 2.0 * err / n;
    }
    loss_out = loss / n;
    grads.zero();
    critic.backward_batch(cotangent_, ws, &grads, nullptr);
    auto params = critic.parameter_views();
    opt.step(params, grad_views(grads));
  };
  critic_step(critic1_, ws_c1_, c1_grads_, critic1_opt_, report.critic1_loss);
  critic_step(critic2_, ws_c2_, c2_grads_, critic2_opt_, report.critic2_loss);

  ++update_count_;
  if (update_count_ % cfg_.policy_delay == 0) {
    // Ascend mean critic1(z, actor(z)) through the action input only.
    const Matrix& pi = actor_.forward_batch(batch_.z, ws_actor_);
    concat_columns(batch_.z, pi, critic_in_);
    const Matrix& q = critic1_.forward_batch(critic_in_, ws_c1_);
    double q_sum = 0.0;
    for (int i = 0; i < n; ++i) q_sum += q.data[i];
    report.actor_loss = -q_sum / n;
    report.actor_updated = true;

    cotangent_.resize(n, 1);
    for (int i = 0; i < n; ++i) cotangent_.data[i] = -1.0 / n;
    critic1_.backward_batch(cotangent_, ws_c1_, nullptr, &input_grad_);

    Matrix action_cot(n, action_dim_);
    for (int i = 0; i < n; ++i)
      std::memcpy(action_cot.row(i), input_grad_.row(i) + state_dim_,
                  action_dim_ * sizeof(double));
    actor_grads_.zero();
    actor_.backward_batch(action_cot, ws_actor_, &actor_grads_, nullptr);
    auto params = actor_.parameter_views();
    actor_opt_.step(params, grad_views(actor_grads_));

    polyak_update(actor_target_, actor_, cfg_.tau);
    polyak_update(critic1_target_, critic1_, cfg_.tau);
    polyak_update(critic2_target_, critic2_, cfg_.tau);
  }
  return report;
}

std::uint64_t Td3Agent::parameter_checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const Mlp& net) {
    for (auto view : net.parameter_views()) {
      const auto* bytes = reinterpret_cast<const unsigned char*>(view.data());
      for (std::size_t i = 0; i < view.size() * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
      }
    }
  };
  mix(actor_);
  mix(critic1_);
  mix(critic2_);
  mix(actor_target_);
  mix(critic1_target_);
  mix(critic2_target_);
  return h;
}

void Td3Agent::save(BinWriter& w) const {
  w.f64(cfg_.gamma);
  w.f64(cfg_.tau);
  w.u32(static_cast<std::uint32_t>(cfg_.policy_delay));
  w.f64(cfg_.target_noise_sigma);
  w.f64(cfg_.target_noise_clip);
  w.f64(cfg_.exploration_sigma);
  w.u32(static_cast<std::uint32_t>(cfg_.batch_size));
  w.u32(static_cast<std::uint32_t>(cfg_.buffer_capacity));
  w.f64(cfg_.actor_lr);
  w.f64(cfg_.critic_lr);
  w.u32(static_cast<std::uint32_t>(cfg_.hidden.size()));
  for (int hsize : cfg_.hidden) w.u32(static_cast<std::uint32_t>(hsize));
  w.u32(static_cast<std::uint32_t>(state_dim_));
  w.u32(static_cast<std::uint32_t>(action_dim_));
  w.i64(update_count_);
  write_mlp(w, actor_);
  write_mlp(w, critic1_);
  write_mlp(w, critic2_);
  write_mlp(w, actor_target_);
  write_mlp(w, critic1_target_);
  write_mlp(w, critic2_target_);
  write_adam(w, actor_opt_.config(), actor_opt_.state());
  write_adam(w, critic1_opt_.config(), critic1_opt_.state());
  write_adam(w, critic2_opt_.config(), critic2_opt_.state());
}

Td3Agent Td3Agent::load(BinReader& r) {
  Td3Agent agent;
  agent.cfg_.gamma = r.f64();
  agent.cfg_.tau = r.f64();
  agent.cfg_.policy_delay = static_cast<int>(r.u32());
  agent.cfg_.target_noise_sigma = r.f64();
  agent.cfg_.target_noise_clip = r.f64();
  agent.cfg_.exploration_sigma = r.f64();
  agent.cfg_.batch_size = static_cast<int>(r.u32());
  agent.cfg_.buffer_capacity = static_cast<int>(r.u32());
  agent.cfg_.actor_lr = r.f64();
  agent.cfg_.critic_lr = r.f64();
  const std::uint32_t nh = r.u32();
  agent.cfg_.hidden.resize(nh);
  for (auto& hsize : agent.cfg_.hidden) hsize = static_cast<int>(r.u32());
  agent.state_dim_ = static_cast<int>(r.u32());
  agent.action_dim_ = static_cast<int>(r.u32());
  agent.update_count_ = r.i64();
  agent.actor_ = read_mlp(r);
  agent.critic1_ = read_mlp(r);
  agent.critic2_ = read_mlp(r);
  agent.actor_target_ = read_mlp(r);
  agent.critic1_target_ = read_mlp(r);
  agent.critic2_target_ = read_mlp(r);
  AdamConfig acfg, c1cfg, c2cfg;
  AdamState ast, c1st, c2st;
  read_adam(r, acfg, ast);
  read_adam(r, c1cfg, c1st);
  read_adam(r, c2cfg, c2st);
  agent.actor_opt_ = AdamOptimizer(std::as_const(agent.actor_).parameter_views(), acfg);
  agent.actor_opt_.state() = std::move(ast);
  agent.critic1_opt_ = AdamOptimizer(std::as_const(agent.critic1_).parameter_views(), c1cfg);
  agent.critic1_opt_.state() = std::move(c1st);
  agent.critic2_opt_ = AdamOptimizer(std::as_const(agent.critic2_).parameter_views(), c2cfg);
  agent.critic2_opt_.state() = std::move(c2st);
  agent.actor_grads_ = agent.actor_.make_grads();
  agent.c1_grads_ = agent.critic1_.make_grads();
  agent.c2_grads_ = agent.critic2_.make_grads();
  return agent;
}

}  // namespace quadrl
