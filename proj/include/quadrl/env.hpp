#pragma once

#include <span>

#include "quadrl/matrix.hpp"
#include "quadrl/sim.hpp"

namespace quadrl {

struct EnvStep {
  Vec obs;
  double reward = 0.0;
  double dt = 0.0;
  double x = 0.0, y = 0.0, yaw = 0.0;
};

struct EnvReset {
  double theta = 0.0;
  double x = 0.0, y = 0.0, yaw = 0.0;
  Vec obs;
};

/// What the trainer sees of the world. LocalEnv runs the simulator
/// in-process; RemoteEnv speaks the same contract over a socket, so a
/// training run is transport-agnostic. The pose fields mirror the external
/// tracking stream of the real rig.
class Env {
 public:
  virtual ~Env() = default;
  virtual EnvStep step(std::span<const double> action) = 0;
  virtual EnvReset reset_heading(double offset) = 0;
  virtual EnvReset teleport_center() = 0;
  virtual void set_noise_enabled(bool on) = 0;
  virtual int obs_dim() const = 0;
};

class LocalEnv : public Env {
 public:
  explicit LocalEnv(QuadSim& sim) : sim_(sim) {}

  EnvStep step(std::span<const double> action) override;
  EnvReset reset_heading(double offset) override;
  EnvReset teleport_center() override;
  void set_noise_enabled(bool on) override { sim_.set_noise_enabled(on); }
  int obs_dim() const override { return sim_.params().obs.dim(); }

  QuadSim& sim() { return sim_; }

 private:
  EnvReset snapshot() const;
  QuadSim& sim_;
};

}  // namespace quadrl
