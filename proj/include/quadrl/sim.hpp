#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "quadrl/matrix.hpp"
#include "quadrl/rng.hpp"

namespace quadrl {

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Sagittal-plane point: x longitudinal (forward positive), z vertical
/// (up positive, so feet sit at negative z).
struct SagittalPoint {
  double x = 0.0;
  double z = 0.0;
};

inline constexpr int kNumLegs = 4;
inline constexpr int kNumServos = 8;

/// Leg order: 0 front-left, 1 front-right, 2 rear-left, 3 rear-right.
/// Servo order: thigh = 2*leg, knee = 2*leg + 1.
inline constexpr bool leg_is_left(int leg) { return leg == 0 || leg == 2; }

struct RobotGeometry {
  double thigh_len = 0.1;
  double shank_len = 0.1;
  double body_length = 0.3;
  double track_width = 0.2;
  std::array<double, kNumServos> servo_min{};
  std::array<double, kNumServos> servo_max{};
  double stance_tolerance = 0.005;

  RobotGeometry();
  void validate() const;
};

struct RobotState {
  double x = 0.0, y = 0.0;       // world frame, meters
  double yaw = 0.0;              // (-pi, pi]
  double roll = 0.0;
  double heading = 0.0;          // commanded direction theta, (-pi, pi]
  std::array<double, kNumServos> servo_pos{};
  std::array<double, kNumServos> filtered_action{};  // a-bar in [-1, 1]
  std::array<SagittalPoint, kNumLegs> foot_prev{};
  double sim_time = 0.0;
  double yaw_err_prev = 0.0;
  long clamp_events = 0;
};

/// Observation component toggles. Canonical order of the assembled vector:
/// [dt, delta_d, current, yaw_err, delta_yaw, roll, servo_pos x 8].
struct ObsConfig {
  bool dt = true;
  bool delta_d = true;
  bool current = true;
  bool yaw_err = true;
  bool delta_yaw = true;
  bool roll = true;
  bool servo_pos = true;
  double current_threshold = 0.05;

  int dim() const;
  void validate() const;  // at least one component enabled
};

struct RewardWeights {
  double forward = 1.0;
  double yaw_change = 1.0;
  double yaw = 0.1;
  double roll = 0.1;
  double current = 1.0;
};

struct SimNoise {
  double sensor_sigma = 0.0;
  double actuation_sigma = 0.0;
  double dt_jitter = 0.0;

  void validate() const;
};

struct SimParams {
  RobotGeometry geometry;
  ObsConfig obs;
  RewardWeights reward;
  SimNoise noise;
  double control_period = 0.05;
  double action_filter_c = 0.5;
  double current_kappa = 0.01;
};

/// a-bar <- a-bar * c + u * (1 - c), then affine map so -1 -> servo_min and
/// +1 -> servo_max. Raw components outside [-1, 1] are clamped and counted
/// in st.clamp_events. Returns the servo targets in radians.
std::array<double, kNumServos> filter_and_map_action(RobotState& st,
                                                     std::span<const double> raw, double c,
                                                     const RobotGeometry& geom);

/// Hip at the leg origin; thigh angle measured from straight down.
/// foot = l1*(sin t, -cos t) + l2*(sin(t+k), -cos(t+k)).
SagittalPoint leg_foot_position(const RobotGeometry& geom, double thigh_angle, double knee_angle);

struct BodyUpdateResult {
  double delta_d = 0.0;         // world displacement projected onto heading
  double forward_motion = 0.0;  // body-frame longitudinal motion
  double dyaw = 0.0;
};

/// Stance-based pose update. Feet within stance_tolerance of the lowest
/// foot count as ground contacts; their mean longitudinal displacement per
/// side drives translation and yaw. With only one side in stance the feet
/// push pure translation (no yaw coupling). No stance feet leaves the pose
/// unchanged.
BodyUpdateResult body_update(const RobotGeometry& geom, RobotState& st,
                             const std::array<SagittalPoint, kNumLegs>& feet_new);

/// Current gated by the configured threshold: values below it read as zero.
double gated_current(const ObsConfig& cfg, double current_raw);

/// Concatenation of the enabled components in canonical order.
Vec assemble_observation(const ObsConfig& cfg, double dt, double delta_d, double current_raw,
                         double yaw_err, double delta_yaw, double roll,
                         std::span<const double, kNumServos> servo_pos);

/// R = w_f * delta_d + w_c * (|yaw_err_prev| - |yaw_err|)
///     - w_y * |yaw_err| - w_r * |roll| - w_i * current
double compute_reward(const RewardWeights& w, double delta_d, double yaw_err_prev,
                      double yaw_err, double roll, double current);

struct StepOutput {
  Vec obs;
  double reward = 0.0;
  double dt = 0.0;
};

/// Deterministic kinematic surrogate of the 8-servo quadruped. One instance
/// per logical thread; with all noise at zero, step is a pure function of
/// state and action.
class QuadSim {
 public:
  QuadSim(const SimParams& params, std::uint64_t seed);

  /// filter -> kinematics -> body update -> reward -> observation, at the
  /// control period (plus jitter when enabled).
  StepOutput step(std::span<const double> raw_action);

  /// theta = wrap(yaw + offset); re-baselines the yaw-error history so the
  /// first step after a reset sees no spurious yaw-change reward. Returns
  /// the new heading.
  double reset_heading_offset(double offset);

  /// Absolute heading command (validation controller path).
  void set_heading(double theta);

  /// Repositioning intervention; yaw and leg state preserved.
  void teleport(double x, double y);

  /// Observation snapshot at a reset boundary: dt, delta_d, current and
  /// delta_yaw read zero; no sensor noise.
  Vec observe() const;

  void set_noise_enabled(bool on) { noise_enabled_ = on; }
  bool noise_enabled() const { return noise_enabled_; }

  const RobotState& state() const { return state_; }
  const SimParams& params() const { return params_; }

 private:
  SimParams params_;
  RobotState state_;
  Rng rng_;
  bool noise_enabled_ = true;
};

}  // namespace quadrl
