#include "quadrl/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "quadrl/numfmt.hpp"

namespace quadrl {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

IniFile IniFile::parse_text(const std::string& text) {
  IniFile ini;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string>* current = nullptr;
  std::string current_name;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) + ": unterminated section");
      current_name = trim(t.substr(1, t.size() - 2));
      ini.sections.emplace_back(current_name, std::map<std::string, std::string>{});
      current = &ini.sections.back().second;
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    if (!current)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": key outside a section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    if (!current->emplace(key, value).second)
      throw std::runtime_error("config: duplicate key '" + key + "' in [" + current_name + "]");
  }
  return ini;
}

IniFile IniFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

namespace {

/// Applies one section's keys onto typed settings and rejects leftovers.
class SectionReader {
 public:
  SectionReader(const std::string& name, std::map<std::string, std::string> kv)
      : name_(name), kv_(std::move(kv)) {}

  void get(const std::string& key, double& out) {
    if (auto v = take(key)) {
      if (!parse_double(*v, out)) fail(key, "not a number");
    }
  }
  void get(const std::string& key, int& out) {
    if (auto v = take(key)) {
      int parsed{};
      auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
      if (ec != std::errc() || p != v->data() + v->size()) fail(key, "not an integer");
      out = parsed;
    }
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (auto v = take(key)) {
      std::uint64_t parsed{};
      auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
      if (ec != std::errc() || p != v->data() + v->size()) fail(key, "not an unsigned integer");
      out = parsed;
    }
  }
  void get(const std::string& key, std::uint16_t& out) {
    std::uint64_t wide = out;
    get(key, wide);
    if (wide > 0xffff) fail(key, "port out of range");
    out = static_cast<std::uint16_t>(wide);
  }
  void get(const std::string& key, bool& out) {
    if (auto v = take(key)) {
      if (*v == "true" || *v == "1" || *v == "on")
        out = true;
      else if (*v == "false" || *v == "0" || *v == "off")
        out = false;
      else
        fail(key, "not a boolean");
    }
  }
  void get(const std::string& key, std::string& out) {
    if (auto v = take(key)) out = *v;
  }

  void finish() const {
    if (!kv_.empty())
      throw std::runtime_error("config: unknown key '" + kv_.begin()->first + "' in [" + name_ + "]");
  }

 private:
  std::optional<std::string> take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }
  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw std::runtime_error("config: key '" + key + "' in [" + name_ + "]: " + why);
  }

  std::string name_;
  std::map<std::string, std::string> kv_;
};

void apply_train(SectionReader& s, TrainConfig& t) {
  s.get("episodes", t.episodes);
  s.get("steps_per_episode", t.steps_per_episode);
  s.get("platform_length", t.platform.length);
  s.get("platform_width", t.platform.width);
  s.get("eval_every", t.eval_every);
  s.get("eval_episodes", t.eval_episodes);
  s.get("warmup_steps", t.warmup_steps);
  s.get("seed", t.master_seed);
  s.get("gru_hidden_dim", t.gru_hidden_dim);
}

void apply_agent(SectionReader& s, Td3Config& a) {
  s.get("gamma", a.gamma);
  s.get("tau", a.tau);
  s.get("policy_delay", a.policy_delay);
  s.get("target_noise_sigma", a.target_noise_sigma);
  s.get("target_noise_clip", a.target_noise_clip);
  s.get("exploration_sigma", a.exploration_sigma);
  s.get("batch_size", a.batch_size);
  s.get("buffer_capacity", a.buffer_capacity);
  s.get("actor_lr", a.actor_lr);
  s.get("critic_lr", a.critic_lr);
  int h1 = a.hidden.size() > 0 ? a.hidden[0] : 256;
  int h2 = a.hidden.size() > 1 ? a.hidden[1] : 256;
  s.get("hidden1", h1);
  s.get("hidden2", h2);
  a.hidden = {h1, h2};
}

void apply_sim(SectionReader& s, SimParams& p) {
  s.get("thigh_len", p.geometry.thigh_len);
  s.get("shank_len", p.geometry.shank_len);
  s.get("body_length", p.geometry.body_length);
  s.get("track_width", p.geometry.track_width);
  double lo = p.geometry.servo_min[0], hi = p.geometry.servo_max[0];
  s.get("servo_min", lo);
  s.get("servo_max", hi);
  p.geometry.servo_min.fill(lo);
  p.geometry.servo_max.fill(hi);
  s.get("stance_tolerance", p.geometry.stance_tolerance);
  s.get("control_period", p.control_period);
  s.get("action_filter_c", p.action_filter_c);
  s.get("current_kappa", p.current_kappa);
}

void apply_reward(SectionReader& s, RewardWeights& w) {
  s.get("forward", w.forward);
  s.get("yaw_change", w.yaw_change);
  s.get("yaw", w.yaw);
  s.get("roll", w.roll);
  s.get("current", w.current);
}

void apply_obs(SectionReader& s, ObsConfig& o) {
  s.get("dt", o.dt);
  s.get("delta_d", o.delta_d);
  s.get("current", o.current);
  s.get("yaw_err", o.yaw_err);
  s.get("delta_yaw", o.delta_yaw);
  s.get("roll", o.roll);
  s.get("servo_pos", o.servo_pos);
  s.get("current_threshold", o.current_threshold);
}

void apply_noise(SectionReader& s, SimNoise& n) {
  s.get("sensor_sigma", n.sensor_sigma);
  s.get("actuation_sigma", n.actuation_sigma);
  s.get("dt_jitter", n.dt_jitter);
}

void apply_strategy(SectionReader& s, ResetStrategy& st) {
  std::string kind = st.name();
  s.get("kind", kind);
  if (kind == "yaw")
    st.kind = ResetStrategy::Kind::to_yaw;
  else if (kind == "uniform")
    st.kind = ResetStrategy::Kind::uniform;
  else if (kind == "normal")
    st.kind = ResetStrategy::Kind::normal;
  else
    throw std::runtime_error("config: strategy kind must be yaw, uniform or normal");
  s.get("bound", st.bound);
  s.get("mu", st.mu);
  s.get("sigma", st.sigma);
}

void apply_validation(SectionReader& s, ValidationConfig& v) {
  s.get("reach_radius", v.reach_radius);
  s.get("heading_period", v.heading_period);
  s.get("stall_window", v.stall_window);
  s.get("stall_min_displacement", v.stall_min_displacement);
  s.get("max_time", v.max_time);
  s.get("line_length", v.line_length);
  s.get("circle_radius", v.circle_radius);
  s.get("circle_waypoints", v.circle_waypoints);
  s.get("eight_radius", v.eight_radius);
  s.get("eight_waypoints", v.eight_waypoints);
  s.get("start_x", v.start_x);
  s.get("start_y", v.start_y);
}

void apply_wire(SectionReader& s, WireConfig& w) {
  s.get("host", w.host);
  s.get("port", w.port);
  s.get("timeout_ms", w.timeout_ms);
}

}  // namespace

RunConfig config_from_ini(const IniFile& ini) {
  RunConfig cfg;
  for (const auto& [name, kv] : ini.sections) {
    SectionReader s(name, kv);
    if (name == "train")
      apply_train(s, cfg.train);
    else if (name == "agent")
      apply_agent(s, cfg.agent);
    else if (name == "sim")
      apply_sim(s, cfg.sim);
    else if (name == "reward")
      apply_reward(s, cfg.sim.reward);
    else if (name == "obs")
      apply_obs(s, cfg.sim.obs);
    else if (name == "noise")
      apply_noise(s, cfg.sim.noise);
    else if (name == "strategy")
      apply_strategy(s, cfg.train.strategy);
    else if (name == "validation")
      apply_validation(s, cfg.validation);
    else if (name == "wire")
      apply_wire(s, cfg.wire);
    else
      throw std::runtime_error("config: unknown section [" + name + "]");
    s.finish();
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return config_from_ini(IniFile::load(path)); }

void RunConfig::validate() const {
  train.validate();
  sim.geometry.validate();
  sim.obs.validate();
  sim.noise.validate();
  if (agent.gamma <= 0.0 || agent.gamma >= 1.0)
    throw std::runtime_error("config: gamma must lie in (0, 1)");
  if (agent.policy_delay < 1) throw std::runtime_error("config: policy_delay must be positive");
  if (agent.batch_size < 1 || agent.buffer_capacity < agent.batch_size)
    throw std::runtime_error("config: buffer must hold at least one batch");
}

std::string canonical_config_text(const RunConfig& c) {
  std::ostringstream o;
  auto d = [](double v) { return format_double(v); };
  o << "train.episodes=" << c.train.episodes << '\n'
    << "train.steps_per_episode=" << c.train.steps_per_episode << '\n'
    << "train.platform_length=" << d(c.train.platform.length) << '\n'
    << "train.platform_width=" << d(c.train.platform.width) << '\n'
    << "train.eval_every=" << c.train.eval_every << '\n'
    << "train.eval_episodes=" << c.train.eval_episodes << '\n'
    << "train.warmup_steps=" << c.train.warmup_steps << '\n'
    << "train.gru_hidden_dim=" << c.train.gru_hidden_dim << '\n'
    << "strategy.kind=" << c.train.strategy.name() << '\n'
    << "strategy.bound=" << d(c.train.strategy.bound) << '\n'
    << "strategy.mu=" << d(c.train.strategy.mu) << '\n'
    << "strategy.sigma=" << d(c.train.strategy.sigma) << '\n'
    << "agent.gamma=" << d(c.agent.gamma) << '\n'
    << "agent.tau=" << d(c.agent.tau) << '\n'
    << "agent.policy_delay=" << c.agent.policy_delay << '\n'
    << "agent.target_noise_sigma=" << d(c.agent.target_noise_sigma) << '\n'
    << "agent.target_noise_clip=" << d(c.agent.target_noise_clip) << '\n'
    << "agent.exploration_sigma=" << d(c.agent.exploration_sigma) << '\n'
    << "agent.batch_size=" << c.agent.batch_size << '\n'
    << "agent.buffer_capacity=" << c.agent.buffer_capacity << '\n'
    << "agent.actor_lr=" << d(c.agent.actor_lr) << '\n'
    << "agent.critic_lr=" << d(c.agent.critic_lr) << '\n'
    << "agent.hidden1=" << (c.agent.hidden.size() > 0 ? c.agent.hidden[0] : 0) << '\n'
    << "agent.hidden2=" << (c.agent.hidden.size() > 1 ? c.agent.hidden[1] : 0) << '\n'
    << "sim.thigh_len=" << d(c.sim.geometry.thigh_len) << '\n'
    << "sim.shank_len=" << d(c.sim.geometry.shank_len) << '\n'
    << "sim.body_length=" << d(c.sim.geometry.body_length) << '\n'
    << "sim.track_width=" << d(c.sim.geometry.track_width) << '\n'
    << "sim.servo_min=" << d(c.sim.geometry.servo_min[0]) << '\n'
    << "sim.servo_max=" << d(c.sim.geometry.servo_max[0]) << '\n'
    << "sim.stance_tolerance=" << d(c.sim.geometry.stance_tolerance) << '\n'
    << "sim.control_period=" << d(c.sim.control_period) << '\n'
    << "sim.action_filter_c=" << d(c.sim.action_filter_c) << '\n'
    << "sim.current_kappa=" << d(c.sim.current_kappa) << '\n'
    << "reward.forward=" << d(c.sim.reward.forward) << '\n'
    << "reward.yaw_change=" << d(c.sim.reward.yaw_change) << '\n'
    << "reward.yaw=" << d(c.sim.reward.yaw) << '\n'
    << "reward.roll=" << d(c.sim.reward.roll) << '\n'
    << "reward.current=" << d(c.sim.reward.current) << '\n'
    << "obs.dt=" << c.sim.obs.dt << '\n'
    << "obs.delta_d=" << c.sim.obs.delta_d << '\n'
    << "obs.current=" << c.sim.obs.current << '\n'
    << "obs.yaw_err=" << c.sim.obs.yaw_err << '\n'
    << "obs.delta_yaw=" << c.sim.obs.delta_yaw << '\n'
    << "obs.roll=" << c.sim.obs.roll << '\n'
    << "obs.servo_pos=" << c.sim.obs.servo_pos << '\n'
    << "obs.current_threshold=" << d(c.sim.obs.current_threshold) << '\n'
    << "noise.sensor_sigma=" << d(c.sim.noise.sensor_sigma) << '\n'
    << "noise.actuation_sigma=" << d(c.sim.noise.actuation_sigma) << '\n'
    << "noise.dt_jitter=" << d(c.sim.noise.dt_jitter) << '\n'
    << "validation.reach_radius=" << d(c.validation.reach_radius) << '\n'
    << "validation.heading_period=" << d(c.validation.heading_period) << '\n'
    << "validation.stall_window=" << d(c.validation.stall_window) << '\n'
    << "validation.stall_min_displacement=" << d(c.validation.stall_min_displacement) << '\n'
    << "validation.max_time=" << d(c.validation.max_time) << '\n'
    << "validation.line_length=" << d(c.validation.line_length) << '\n'
    << "validation.circle_radius=" << d(c.validation.circle_radius) << '\n'
    << "validation.circle_waypoints=" << c.validation.circle_waypoints << '\n'
    << "validation.eight_radius=" << d(c.validation.eight_radius) << '\n'
    << "validation.eight_waypoints=" << c.validation.eight_waypoints << '\n'
    << "validation.start_x=" << d(c.validation.start_x) << '\n'
    << "validation.start_y=" << d(c.validation.start_y) << '\n'
    << "wire.host=" << c.wire.host << '\n'
    << "wire.port=" << c.wire.port << '\n'
    << "wire.timeout_ms=" << c.wire.timeout_ms << '\n';
  return o.str();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = canonical_config_text(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[15 - i] = hex[(h >> (4 * i)) & 0xf];
  buf[16] = '\0';
  return std::string(buf);
}

}  // namespace quadrl
