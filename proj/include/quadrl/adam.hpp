#pragma once

#include <span>
#include <vector>

#include "quadrl/matrix.hpp"

namespace quadrl {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<Vec> first_moment;
  std::vector<Vec> second_moment;
  long step_count = 0;
};

/// One bias-corrected Adam update over a list of parameter tensors.
/// Moments must mirror the parameter shapes; throws on mismatch.
void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads, AdamState& state,
               const AdamConfig& cfg);

/// Owns the moment buffers for one network's parameter list.
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  AdamOptimizer(std::span<const std::span<const double>> params, AdamConfig cfg);

  void step(std::span<const std::span<double>> params,
            std::span<const std::span<const double>> grads);

  const AdamConfig& config() const { return cfg_; }
  AdamState& state() { return state_; }
  const AdamState& state() const { return state_; }

 private:
  AdamConfig cfg_;
  AdamState state_;
};

}  // namespace quadrl
