#include "quadrl/env.hpp"

namespace quadrl {

EnvStep LocalEnv::step(std::span<const double> action) {
  StepOutput s = sim_.step(action);
  const RobotState& st = sim_.state();
  return {std::move(s.obs), s.reward, s.dt, st.x, st.y, st.yaw};
}

EnvReset LocalEnv::snapshot() const {
  const RobotState& st = sim_.state();
  return {st.heading, st.x, st.y, st.yaw, sim_.observe()};
}

EnvReset LocalEnv::reset_heading(double offset) {
  sim_.reset_heading_offset(offset);
  return snapshot();
}

EnvReset LocalEnv::teleport_center() {
  sim_.teleport(0.0, 0.0);
  return snapshot();
}

}  // namespace quadrl
