#include "quadrl/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace quadrl {

void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads, AdamState& state,
               const AdamConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size())
    throw std::invalid_argument("adam: tensor list size mismatch");
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto p = params[t];
    auto g = grads[t];
    Vec& m = state.first_moment[t];
    Vec& v = state.second_moment[t];
    if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size())
      throw std::invalid_argument("adam: tensor shape mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      p[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

AdamOptimizer::AdamOptimizer(std::span<const std::span<const double>> params, AdamConfig cfg)
    : cfg_(cfg) {
  for (auto p : params) {
    state_.first_moment.emplace_back(p.size(), 0.0);
    state_.second_moment.emplace_back(p.size(), 0.0);
  }
}

void AdamOptimizer::step(std::span<const std::span<double>> params,
                         std::span<const std::span<const double>> grads) {
  adam_step(params, grads, state_, cfg_);
}

}  // namespace quadrl
