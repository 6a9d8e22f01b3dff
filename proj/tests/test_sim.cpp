#include <cmath>
#include <cstring>

#include "doctest.h"
#include "quadrl/sim.hpp"

using namespace quadrl;

namespace {

Vec gait_action(int step) {
  // Trot: diagonal pairs {FL, RR} and {FR, RL} half a cycle apart. The knee
  // oscillates about a flexed bias so the leg shortens once per cycle; a
  // zero-mean knee would lift the foot twice per cycle and the stance sweep
  // would cancel exactly.
  const double omega = 2.0 * M_PI / 20.0;
  Vec u(8);
  for (int leg = 0; leg < 4; ++leg) {
    const bool pair_a = (leg == 0 || leg == 3);
    const double phase = omega * step + (pair_a ? 0.0 : M_PI);
    u[2 * leg] = 0.5 * std::sin(phase);                          // thigh
    u[2 * leg + 1] = 0.5 + 0.45 * std::sin(phase + M_PI / 2.0);  // knee
  }
  return u;
}

}  // namespace

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(6.0) == doctest::Approx(6.0 - 2.0 * M_PI).epsilon(1e-15));
  CHECK(wrap_angle(3.0 - (-3.0)) == doctest::Approx(-0.28318530717958623).epsilon(1e-12));
  for (double a = -20.0; a <= 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    CHECK(w > -M_PI);
    CHECK(w <= M_PI);
    CHECK(std::abs(std::remainder(w - a, 2.0 * M_PI)) < 1e-12);
  }
}

TEST_CASE("action filter: paper coefficient, disabled filter, geometric settling") {
  RobotGeometry geom;
  RobotState st;

  SUBCASE("one step from rest at c = 0.5 halves the command") {
    Vec u(8, 1.0);
    filter_and_map_action(st, u, 0.5, geom);
    for (double v : st.filtered_action) CHECK(v == 0.5);
  }

  SUBCASE("c = 0 passes the raw command through") {
    Vec u{0.3, -0.7, 1.0, -1.0, 0.0, 0.25, 0.5, -0.5};
    filter_and_map_action(st, u, 0.0, geom);
    for (int i = 0; i < 8; ++i) CHECK(st.filtered_action[i] == u[i]);
  }

  SUBCASE("constant command settles geometrically") {
    Vec u(8, 1.0);
    for (int i = 0; i < 20; ++i) filter_and_map_action(st, u, 0.5, geom);
    for (double v : st.filtered_action) CHECK(std::abs(v - 1.0) < std::pow(2.0, -20.0) + 1e-18);
  }

  SUBCASE("out-of-range components are clamped and counted") {
    Vec u(8, 0.0);
    u[2] = 1.5;
    u[5] = -2.0;
    filter_and_map_action(st, u, 0.0, geom);
    CHECK(st.clamp_events == 2);
    CHECK(st.filtered_action[2] == 1.0);
    CHECK(st.filtered_action[5] == -1.0);
  }

  SUBCASE("mapping is affine onto the servo range") {
    Vec u(8, 1.0);
    auto targets = filter_and_map_action(st, u, 0.0, geom);
    for (int i = 0; i < 8; ++i) CHECK(targets[i] == doctest::Approx(geom.servo_max[i]));
    Vec d(8, -1.0);
    auto lows = filter_and_map_action(st, d, 0.0, geom);
    for (int i = 0; i < 8; ++i) CHECK(lows[i] == doctest::Approx(geom.servo_min[i]));
  }
}

TEST_CASE("leg forward kinematics") {
  RobotGeometry geom;
  geom.thigh_len = 0.1;
  geom.shank_len = 0.1;

  SUBCASE("straight down at zero angles") {
    const auto foot = leg_foot_position(geom, 0.0, 0.0);
    CHECK(foot.x == doctest::Approx(0.0));
    CHECK(foot.z == doctest::Approx(-0.2));
  }

  SUBCASE("quarter turn points the leg forward") {
    const auto foot = leg_foot_position(geom, M_PI / 2.0, 0.0);
    CHECK(foot.x == doctest::Approx(0.2));
    CHECK(foot.z == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("reach never exceeds the leg length; equality only at straight knee") {
    Rng rng(6);
    for (int i = 0; i < 2000; ++i) {
      const double t = rng.uniform(geom.servo_min[0], geom.servo_max[0]);
      const double k = rng.uniform(geom.servo_min[1], geom.servo_max[1]);
      const auto foot = leg_foot_position(geom, t, k);
      const double reach = std::hypot(foot.x, foot.z);
      CHECK(reach <= geom.thigh_len + geom.shank_len + 1e-12);
      if (std::abs(k) > 1e-3)
        CHECK(reach < geom.thigh_len + geom.shank_len - 1e-9);
    }
    const auto straight = leg_foot_position(geom, 0.3, 0.0);
    CHECK(std::hypot(straight.x, straight.z) ==
          doctest::Approx(geom.thigh_len + geom.shank_len).epsilon(1e-12));
  }
}

TEST_CASE("body update: symmetric push, antisymmetric twist, heading projection") {
  RobotGeometry geom;
  geom.track_width = 0.2;

  SUBCASE("all four feet pushed back advance the body") {
    RobotState st;
    for (auto& f : st.foot_prev) f = {0.0, -0.2};
    std::array<SagittalPoint, 4> feet;
    for (auto& f : feet) f = {-0.01, -0.2};
    const auto r = body_update(geom, st, feet);
    CHECK(r.forward_motion == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(r.dyaw == 0.0);
    CHECK(st.x == doctest::Approx(0.01));
    CHECK(st.y == doctest::Approx(0.0));
    CHECK(st.yaw == 0.0);
  }

  SUBCASE("left forward, right back twists in place") {
    RobotState st;
    for (auto& f : st.foot_prev) f = {0.0, -0.2};
    std::array<SagittalPoint, 4> feet;
    feet[0] = feet[2] = {+0.01, -0.2};  // left side
    feet[1] = feet[3] = {-0.01, -0.2};  // right side
    const auto r = body_update(geom, st, feet);
    CHECK(r.forward_motion == doctest::Approx(0.0));
    CHECK(r.dyaw == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(st.yaw == doctest::Approx(0.1).epsilon(1e-12));
  }

  SUBCASE("delta_d projects displacement onto the heading") {
    RobotState st;
    st.heading = 0.0;
    st.yaw = 0.0;
    for (auto& f : st.foot_prev) f = {0.0, -0.2};
    std::array<SagittalPoint, 4> feet;
    for (auto& f : feet) f = {-0.02, -0.2};
    auto r = body_update(geom, st, feet);
    CHECK(r.delta_d == doctest::Approx(r.forward_motion).epsilon(1e-12));

    RobotState st2;
    st2.heading = M_PI / 2.0;  // heading perpendicular to yaw
    st2.yaw = 0.0;
    for (auto& f : st2.foot_prev) f = {0.0, -0.2};
    auto r2 = body_update(geom, st2, feet);
    CHECK(r2.delta_d == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("single-side stance pushes pure translation without slip") {
    RobotState st;
    st.foot_prev[0] = {0.00, -0.20};  // FL low
    st.foot_prev[2] = {0.02, -0.20};  // RL low
    st.foot_prev[1] = {0.00, -0.10};  // right side lifted
    st.foot_prev[3] = {0.00, -0.10};
    std::array<SagittalPoint, 4> feet = st.foot_prev;
    feet[0].x -= 0.01;
    feet[2].x -= 0.01;
    const auto r = body_update(geom, st, feet);
    CHECK(r.dyaw == 0.0);
    CHECK(r.forward_motion == doctest::Approx(0.01).epsilon(1e-12));
    // World position of the mean stance foot is unchanged (no slip):
    // body moved forward exactly as much as the feet swept back.
    const double mean_before = (0.0 + 0.02) / 2.0;               // body at 0
    const double mean_after = st.x + (-0.01 + 0.01) / 2.0;       // displaced body
    CHECK(std::abs(mean_after - mean_before) < 1e-9);
  }
}

TEST_CASE("observation assembly: arity, gating, wrap") {
  ObsConfig cfg;
  CHECK(cfg.dim() == 14);

  std::array<double, 8> servos{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const Vec full = assemble_observation(cfg, 0.05, 0.01, 0.2, 0.3, -0.1, 0.02, servos);
  REQUIRE(full.size() == 14);
  CHECK(full[0] == 0.05);
  CHECK(full[1] == 0.01);
  CHECK(full[2] == 0.2);  // above default threshold 0.05
  CHECK(full[3] == 0.3);
  CHECK(full[4] == -0.1);
  CHECK(full[5] == 0.02);
  CHECK(full[13] == 0.8);

  ObsConfig no_servo = cfg;
  no_servo.servo_pos = false;
  CHECK(no_servo.dim() == 6);
  CHECK(assemble_observation(no_servo, 0, 0, 0, 0, 0, 0, servos).size() == 6);

  // current below threshold reads zero
  const Vec gated = assemble_observation(cfg, 0, 0, 0.01, 0, 0, 0, servos);
  CHECK(gated[2] == 0.0);

  ObsConfig none;
  none.dt = none.delta_d = none.current = none.yaw_err = none.delta_yaw = none.roll =
      none.servo_pos = false;
  CHECK_THROWS(none.validate());
}

TEST_CASE("reward formula") {
  RewardWeights w;

  SUBCASE("paper weights on the worked example") {
    // delta_d 0.01, |yaw_err| shrank 0.25 -> 0.20, roll 0.1, no current
    const double r = compute_reward(w, 0.01, 0.25, 0.20, 0.1, 0.0);
    CHECK(r == doctest::Approx(0.03).epsilon(1e-12));
  }

  SUBCASE("null step is zero reward") {
    CHECK(compute_reward(w, 0.0, 0.0, 0.0, 0.0, 0.0) == 0.0);
  }

  SUBCASE("matches an independently coded formula over random inputs") {
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
      const double dd = rng.uniform(-0.05, 0.05);
      const double yp = rng.uniform(-M_PI, M_PI);
      const double yc = rng.uniform(-M_PI, M_PI);
      const double roll = rng.uniform(-0.5, 0.5);
      const double cur = rng.uniform(0.0, 0.2);
      const double want =
          dd + (std::fabs(yp) - std::fabs(yc)) - 0.1 * std::fabs(yc) - 0.1 * std::fabs(roll) - cur;
      CHECK(compute_reward(w, dd, yp, yc, roll, cur) == doctest::Approx(want).epsilon(1e-12));
    }
  }

  SUBCASE("each weight removes exactly its term") {
    const double dd = 0.02, yp = 0.4, yc = 0.1, roll = 0.2, cur = 0.05;
    RewardWeights off;
    off.forward = 0;
    CHECK(compute_reward(off, dd, yp, yc, roll, cur) ==
          doctest::Approx(compute_reward(w, dd, yp, yc, roll, cur) - dd));
    off = w;
    off.yaw_change = 0;
    CHECK(compute_reward(off, dd, yp, yc, roll, cur) ==
          doctest::Approx(compute_reward(w, dd, yp, yc, roll, cur) - (yp - yc)));
    off = w;
    off.yaw = 0;
    CHECK(compute_reward(off, dd, yp, yc, roll, cur) ==
          doctest::Approx(compute_reward(w, dd, yp, yc, roll, cur) + 0.1 * yc));
    off = w;
    off.roll = 0;
    CHECK(compute_reward(off, dd, yp, yc, roll, cur) ==
          doctest::Approx(compute_reward(w, dd, yp, yc, roll, cur) + 0.1 * roll));
    off = w;
    off.current = 0;
    CHECK(compute_reward(off, dd, yp, yc, roll, cur) ==
          doctest::Approx(compute_reward(w, dd, yp, yc, roll, cur) + cur));
  }
}

TEST_CASE("sim step: no-motion reward, determinism, angle closure") {
  SimParams params;

  SUBCASE("zero action change from rest") {
    QuadSim sim(params, 1);
    sim.set_heading(0.7);  // yaw stays 0, so |yaw_err| = 0.7
    const auto out = sim.step(Vec(8, 0.0));
    CHECK(out.reward == doctest::Approx(-0.1 * 0.7).epsilon(1e-12));
    CHECK(sim.state().x == 0.0);
    CHECK(sim.state().y == 0.0);
  }

  SUBCASE("identical seeds and action streams give bit-identical trajectories") {
    SimParams noisy = params;
    noisy.noise.sensor_sigma = 0.01;
    noisy.noise.actuation_sigma = 0.005;
    noisy.noise.dt_jitter = 0.002;
    QuadSim a(noisy, 42), b(noisy, 42);
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
      Vec u(8);
      for (double& v : u) v = rng.uniform(-1.0, 1.0);
      const auto ra = a.step(u);
      const auto rb = b.step(u);
      CHECK(std::memcmp(ra.obs.data(), rb.obs.data(), ra.obs.size() * sizeof(double)) == 0);
      CHECK(ra.reward == rb.reward);
      CHECK(ra.dt == rb.dt);
    }
    CHECK(a.state().x == b.state().x);
    CHECK(a.state().yaw == b.state().yaw);
  }

  SUBCASE("yaw remains wrapped under persistent twisting") {
    QuadSim sim(params, 2);
    Vec u(8, 0.0);
    for (int t = 0; t < 4000; ++t) {
      // saw-tooth on left/right thighs in opposite phase to keep turning
      const double s = std::sin(2.0 * M_PI * t / 15.0);
      u[0] = u[4] = s;
      u[2] = u[6] = -s;
      sim.step(u);
      CHECK(sim.state().yaw > -M_PI);
      CHECK(sim.state().yaw <= M_PI);
    }
  }

  SUBCASE("heading reset re-baselines the yaw-error history") {
    QuadSim sim(params, 3);
    const double theta = sim.reset_heading_offset(0.5);
    CHECK(theta == doctest::Approx(0.5));
    CHECK(sim.state().yaw_err_prev == doctest::Approx(0.5));
    const auto out = sim.step(Vec(8, 0.0));
    // No motion: reward is only the yaw penalty, no yaw-change windfall.
    CHECK(out.reward == doctest::Approx(-0.1 * 0.5).epsilon(1e-12));
  }
}

TEST_CASE("scripted crawl cycle produces net forward motion") {
  SimParams params;
  QuadSim sim(params, 10);
  for (int t = 0; t < 100; ++t) sim.step(gait_action(t));
  INFO("x after 100 steps: ", sim.state().x);
  // this gait covers a couple of body lengths in five seconds
  CHECK(sim.state().x > 0.05);
  CHECK(std::abs(sim.state().y) < 0.2);
}

TEST_CASE("observe snapshot matches the canonical layout") {
  SimParams params;
  QuadSim sim(params, 4);
  sim.set_heading(1.0);
  const Vec obs = sim.observe();
  REQUIRE(obs.size() == 14);
  CHECK(obs[0] == 0.0);                       // dt
  CHECK(obs[1] == 0.0);                       // delta_d
  CHECK(obs[2] == 0.0);                       // current
  CHECK(obs[3] == doctest::Approx(1.0));      // yaw_err
  CHECK(obs[4] == 0.0);                       // delta_yaw
  CHECK(obs[5] == doctest::Approx(0.0));      // roll
}
