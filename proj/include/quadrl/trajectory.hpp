#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace quadrl {

/// Ordered waypoint course driving the validation heading controller.
struct Trajectory {
  std::string name;
  std::vector<std::array<double, 2>> waypoints;  // meters, world frame
  double reach_radius = 0.15;
  double heading_period = 5.0;

  void validate() const;  // >= 2 waypoints, consecutive distinct, radius > 0
};

enum class TrajectoryKind { line, circle, eight };

/// Throws std::invalid_argument for anything but line/circle/eight.
TrajectoryKind parse_trajectory_kind(const std::string& s);

/// Two waypoints, (0,0) to (length,0).
Trajectory build_line(double length);

/// n equally spaced points on a circle of the given radius centered at the
/// origin, starting at (radius, 0), traversed one direction.
Trajectory build_circle(double radius, int n);

/// Two tangent circles of the given radius crossing at the origin,
/// traversed as one loop that turns clockwise around the right lobe and
/// counterclockwise around the left, forcing turns in both directions.
Trajectory build_eight(double radius, int waypoints_total);

/// theta = atan2(wy - y, wx - x), wrapped to (-pi, pi]. Coincident points
/// return nullopt: the caller should advance the waypoint instead.
std::optional<double> heading_to_waypoint(double x, double y, double wx, double wy);

/// Signed turning angles between consecutive polyline segments; used to
/// check that a course really demands both turn directions.
std::vector<double> polyline_turning_angles(const std::vector<std::array<double, 2>>& pts);

}  // namespace quadrl
