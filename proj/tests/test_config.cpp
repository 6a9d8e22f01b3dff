#include "doctest.h"
#include "quadrl/config.hpp"

using namespace quadrl;

TEST_CASE("config defaults match the project defaults") {
  RunConfig cfg;
  CHECK(cfg.train.episodes == 600);
  CHECK(cfg.train.steps_per_episode == 500);
  CHECK(cfg.train.platform.length == 3.5);
  CHECK(cfg.train.platform.width == 2.5);
  CHECK(cfg.agent.gamma == 0.99);
  CHECK(cfg.agent.tau == 0.005);
  CHECK(cfg.agent.policy_delay == 2);
  CHECK(cfg.agent.batch_size == 256);
  CHECK(cfg.agent.buffer_capacity == 300000);
  CHECK(cfg.sim.action_filter_c == 0.5);
  CHECK(cfg.sim.control_period == 0.05);
  CHECK(cfg.train.strategy.kind == ResetStrategy::Kind::normal);
  CHECK(cfg.train.strategy.sigma == doctest::Approx(M_PI / 4.0));
  CHECK(cfg.sim.obs.dim() == 14);
}

TEST_CASE("config file overrides and strategy parsing") {
  const std::string text = R"(
# desk-scale run
[train]
episodes = 150
steps_per_episode = 200
eval_every = 15
seed = 9

[strategy]
kind = uniform
bound = 0.785398

[agent]
batch_size = 128
hidden1 = 64
hidden2 = 64

[reward]
yaw = 0.2  ; heavier heading penalty

[obs]
current = false
)";
  RunConfig cfg = config_from_ini(IniFile::parse_text(text));
  CHECK(cfg.train.episodes == 150);
  CHECK(cfg.train.steps_per_episode == 200);
  CHECK(cfg.train.eval_every == 15);
  CHECK(cfg.train.master_seed == 9);
  CHECK(cfg.train.strategy.kind == ResetStrategy::Kind::uniform);
  CHECK(cfg.train.strategy.bound == doctest::Approx(0.785398));
  CHECK(cfg.agent.batch_size == 128);
  CHECK(cfg.agent.hidden == std::vector<int>{64, 64});
  CHECK(cfg.sim.reward.yaw == 0.2);
  CHECK_FALSE(cfg.sim.obs.current);
  CHECK(cfg.sim.obs.dim() == 13);
  // untouched defaults survive
  CHECK(cfg.agent.gamma == 0.99);
}

TEST_CASE("config rejects unknown keys and sections") {
  CHECK_THROWS_WITH(config_from_ini(IniFile::parse_text("[train]\nepisode = 5\n")),
                    doctest::Contains("unknown key"));
  CHECK_THROWS_WITH(config_from_ini(IniFile::parse_text("[training]\nepisodes = 5\n")),
                    doctest::Contains("unknown section"));
  CHECK_THROWS(config_from_ini(IniFile::parse_text("[train]\nepisodes = soon\n")));
  CHECK_THROWS(config_from_ini(IniFile::parse_text("[train]\nepisodes = 5\nepisodes = 6\n")));
  CHECK_THROWS(config_from_ini(IniFile::parse_text("episodes = 5\n")));
  CHECK_THROWS(config_from_ini(IniFile::parse_text("[strategy]\nkind = diagonal\n")));
}

TEST_CASE("config validation catches inconsistent settings") {
  CHECK_THROWS(config_from_ini(IniFile::parse_text("[agent]\ngamma = 1.5\n")));
  CHECK_THROWS(config_from_ini(IniFile::parse_text("[agent]\nbatch_size = 64\nbuffer_capacity = 8\n")));
  CHECK_THROWS(config_from_ini(
      IniFile::parse_text("[obs]\ndt=false\ndelta_d=false\ncurrent=false\nyaw_err=false\n"
                          "delta_yaw=false\nroll=false\nservo_pos=false\n")));
}

TEST_CASE("config hash is stable and sensitive") {
  RunConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  b.agent.tau = 0.01;
  CHECK(config_hash(a) != config_hash(b));
  // the master seed is run metadata, not part of the config identity
  RunConfig c;
  c.train.master_seed = 12345;
  CHECK(config_hash(a) == config_hash(c));
}
