#include "quadrl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quadrl {

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

RobotGeometry::RobotGeometry() {
  servo_min.fill(-M_PI / 3.0);
  servo_max.fill(M_PI / 3.0);
}

void RobotGeometry::validate() const {
  if (thigh_len <= 0 || shank_len <= 0 || body_length <= 0 || track_width <= 0 ||
      stance_tolerance <= 0)
    throw std::invalid_argument("geometry: lengths must be strictly positive");
  for (int i = 0; i < kNumServos; ++i)
    if (!(servo_min[i] < servo_max[i]))
      throw std::invalid_argument("geometry: servo_min must be below servo_max");
}

int ObsConfig::dim() const {
  int n = 0;
  n += dt ? 1 : 0;
  n += delta_d ? 1 : 0;
  n += current ? 1 : 0;
  n += yaw_err ? 1 : 0;
  n += delta_yaw ? 1 : 0;
  n += roll ? 1 : 0;
  n += servo_pos ? kNumServos : 0;
  return n;
}

void ObsConfig::validate() const {
  if (dim() == 0) throw std::invalid_argument("obs: at least one component must be enabled");
}

void SimNoise::validate() const {
  if (sensor_sigma < 0 || actuation_sigma < 0 || dt_jitter < 0)
    throw std::invalid_argument("noise: deviations must be non-negative");
}

std::array<double, kNumServos> filter_and_map_action(RobotState& st, std::span<const double> raw,
                                                     double c, const RobotGeometry& geom) {
  if (raw.size() != kNumServos)
    throw std::invalid_argument("action: expected one component per servo");
  std::array<double, kNumServos> targets;
  for (int i = 0; i < kNumServos; ++i) {
    double u = raw[i];
    if (u < -1.0 || u > 1.0) {
      u = std::clamp(u, -1.0, 1.0);
      ++st.clamp_events;
    }
    st.filtered_action[i] = st.filtered_action[i] * c + u * (1.0 - c);
    const double unit = (st.filtered_action[i] + 1.0) * 0.5;  // -1..1 -> 0..1
    targets[i] = geom.servo_min[i] + unit * (geom.servo_max[i] - geom.servo_min[i]);
  }
  return targets;
}

SagittalPoint leg_foot_position(const RobotGeometry& geom, double thigh_angle, double knee_angle) {
  const double t = thigh_angle;
  const double tk = thigh_angle + knee_angle;
  return {geom.thigh_len * std::sin(t) + geom.shank_len * std::sin(tk),
          -geom.thigh_len * std::cos(t) - geom.shank_len * std::cos(tk)};
}

BodyUpdateResult body_update(const RobotGeometry& geom, RobotState& st,
                             const std::array<SagittalPoint, kNumLegs>& feet_new) {
  double min_z = feet_new[0].z;
  for (int leg = 1; leg < kNumLegs; ++leg) min_z = std::min(min_z, feet_new[leg].z);

  double disp_sum[2] = {0.0, 0.0};  // [left, right]
  double height_sum[2] = {0.0, 0.0};
  int stance_count[2] = {0, 0};
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (feet_new[leg].z > min_z + geom.stance_tolerance) continue;
    const int side = leg_is_left(leg) ? 0 : 1;
    disp_sum[side] += feet_new[leg].x - st.foot_prev[leg].x;
    height_sum[side] += feet_new[leg].z;
    ++stance_count[side];
  }

  BodyUpdateResult out;
  const int total = stance_count[0] + stance_count[1];
  if (total == 0) return out;  // nothing planted, pose unchanged

  if (stance_count[0] > 0 && stance_count[1] > 0) {
    const double p_left = disp_sum[0] / stance_count[0];
    const double p_right = disp_sum[1] / stance_count[1];
    out.forward_motion = -(p_left + p_right) * 0.5;
    out.dyaw = -(p_right - p_left) / geom.track_width;
  } else {
    const int side = stance_count[0] > 0 ? 0 : 1;
    out.forward_motion = -disp_sum[side] / stance_count[side];
    out.dyaw = 0.0;  // single-side stance pushes pure translation
  }

  const double dx = out.forward_motion * std::cos(st.yaw);
  const double dy = out.forward_motion * std::sin(st.yaw);
  st.x += dx;
  st.y += dy;
  st.yaw = wrap_angle(st.yaw + out.dyaw);

  // Roll from the per-side mean stance heights; a side with no stance foot
  // falls back to the mean over all its feet.
  double side_height[2];
  for (int side = 0; side < 2; ++side) {
    if (stance_count[side] > 0) {
      side_height[side] = height_sum[side] / stance_count[side];
    } else {
      double sum = 0.0;
      for (int leg = side; leg < kNumLegs; leg += 2) sum += feet_new[leg].z;
      side_height[side] = sum / 2.0;
    }
  }
  st.roll = wrap_angle(std::atan((side_height[0] - side_height[1]) / geom.track_width));

  out.delta_d = dx * std::cos(st.heading) + dy * std::sin(st.heading);
  return out;
}

double gated_current(const ObsConfig& cfg, double current_raw) {
  return current_raw >= cfg.current_threshold ? current_raw : 0.0;
}

Vec assemble_observation(const ObsConfig& cfg, double dt, double delta_d, double current_raw,
                         double yaw_err, double delta_yaw, double roll,
                         std::span<const double, kNumServos> servo_pos) {
  Vec obs;
  obs.reserve(cfg.dim());
  if (cfg.dt) obs.push_back(dt);
  if (cfg.delta_d) obs.push_back(delta_d);
  if (cfg.current) obs.push_back(gated_current(cfg, current_raw));
  if (cfg.yaw_err) obs.push_back(yaw_err);
  if (cfg.delta_yaw) obs.push_back(delta_yaw);
  if (cfg.roll) obs.push_back(roll);
  if (cfg.servo_pos)
    for (int i = 0; i < kNumServos; ++i) obs.push_back(servo_pos[i]);
  return obs;
}

double compute_reward(const RewardWeights& w, double delta_d, double yaw_err_prev,
                      double yaw_err, double roll, double current) {
  return w.forward * delta_d + w.yaw_change * (std::abs(yaw_err_prev) - std::abs(yaw_err)) -
         w.yaw * std::abs(yaw_err) - w.roll * std::abs(roll) - w.current * current;
}

QuadSim::QuadSim(const SimParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {
  params_.geometry.validate();
  params_.obs.validate();
  params_.noise.validate();
  if (params_.control_period <= 0)
    throw std::invalid_argument("sim: control period must be positive");
  if (params_.action_filter_c < 0 || params_.action_filter_c >= 1.0)
    throw std::invalid_argument("sim: filter coefficient must lie in [0, 1)");
  // Feet start where the zero filtered action puts them (mid-range servos).
  for (int i = 0; i < kNumServos; ++i) {
    state_.servo_pos[i] = 0.5 * (params_.geometry.servo_min[i] + params_.geometry.servo_max[i]);
  }
  for (int leg = 0; leg < kNumLegs; ++leg)
    state_.foot_prev[leg] = leg_foot_position(params_.geometry, state_.servo_pos[2 * leg],
                                              state_.servo_pos[2 * leg + 1]);
}

StepOutput QuadSim::step(std::span<const double> raw_action) {
  const auto servo_prev = state_.servo_pos;
  auto targets =
      filter_and_map_action(state_, raw_action, params_.action_filter_c, params_.geometry);
  if (noise_enabled_ && params_.noise.actuation_sigma > 0) {
    for (int i = 0; i < kNumServos; ++i)
      targets[i] = std::clamp(targets[i] + rng_.gaussian(0.0, params_.noise.actuation_sigma),
                              params_.geometry.servo_min[i], params_.geometry.servo_max[i]);
  }
  state_.servo_pos = targets;

  std::array<SagittalPoint, kNumLegs> feet;
  for (int leg = 0; leg < kNumLegs; ++leg)
    feet[leg] = leg_foot_position(params_.geometry, state_.servo_pos[2 * leg],
                                  state_.servo_pos[2 * leg + 1]);
  const BodyUpdateResult motion = body_update(params_.geometry, state_, feet);
  state_.foot_prev = feet;

  double dt = params_.control_period;
  if (noise_enabled_ && params_.noise.dt_jitter > 0) dt += rng_.uniform(0.0, params_.noise.dt_jitter);
  state_.sim_time += dt;

  double travel = 0.0;
  for (int i = 0; i < kNumServos; ++i) travel += std::abs(state_.servo_pos[i] - servo_prev[i]);
  const double current = gated_current(params_.obs, params_.current_kappa * travel);

  const double yaw_err = wrap_angle(state_.heading - state_.yaw);
  const double delta_yaw = wrap_angle(yaw_err - state_.yaw_err_prev);

  StepOutput out;
  out.reward = compute_reward(params_.reward, motion.delta_d, state_.yaw_err_prev, yaw_err,
                              state_.roll, current);
  out.dt = dt;
  out.obs = assemble_observation(params_.obs, dt, motion.delta_d, current, yaw_err, delta_yaw,
                                 state_.roll, state_.servo_pos);
  if (noise_enabled_ && params_.noise.sensor_sigma > 0)
    for (double& v : out.obs) v += rng_.gaussian(0.0, params_.noise.sensor_sigma);

  state_.yaw_err_prev = yaw_err;
  return out;
}

double QuadSim::reset_heading_offset(double offset) {
  set_heading(state_.yaw + offset);
  return state_.heading;
}

void QuadSim::set_heading(double theta) {
  state_.heading = wrap_angle(theta);
  state_.yaw_err_prev = wrap_angle(state_.heading - state_.yaw);
}

void QuadSim::teleport(double x, double y) {
  state_.x = x;
  state_.y = y;
}

Vec QuadSim::observe() const {
  const double yaw_err = wrap_angle(state_.heading - state_.yaw);
  return assemble_observation(params_.obs, 0.0, 0.0, 0.0, yaw_err, 0.0, state_.roll,
                              state_.servo_pos);
}

}  // namespace quadrl
