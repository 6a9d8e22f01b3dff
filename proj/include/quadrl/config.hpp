#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quadrl/sim.hpp"
#include "quadrl/td3.hpp"
#include "quadrl/trainer.hpp"

namespace quadrl {

/// Section -> key -> raw value. '#' and ';' start comments; keys and
/// section names are case-sensitive.
struct IniFile {
  std::vector<std::pair<std::string, std::map<std::string, std::string>>> sections;

  static IniFile parse_text(const std::string& text);
  static IniFile load(const std::string& path);
};

struct ValidationConfig {
  double reach_radius = 0.15;
  double heading_period = 5.0;
  double stall_window = 5.0;
  double stall_min_displacement = 0.01;
  double max_time = 240.0;
  double line_length = 2.0;
  double circle_radius = 0.75;
  int circle_waypoints = 12;
  double eight_radius = 0.75;
  int eight_waypoints = 16;
  // The robot starts slightly off the course so the first waypoint must be
  // earned rather than inherited from the spawn position.
  double start_x = -0.25;
  double start_y = 0.0;
};

struct WireConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7600;
  int timeout_ms = 5000;
};

/// One run's complete configuration. Defaults here are the project
/// defaults; a config file overrides per key. Unknown sections or keys are
/// errors.
struct RunConfig {
  TrainConfig train;
  Td3Config agent;
  SimParams sim;
  ValidationConfig validation;
  WireConfig wire;

  void validate() const;
};

RunConfig config_from_ini(const IniFile& ini);
RunConfig load_run_config(const std::string& path);

/// Canonical key=value dump of every setting; basis of the config hash
/// recorded in run metadata.
std::string canonical_config_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace quadrl
