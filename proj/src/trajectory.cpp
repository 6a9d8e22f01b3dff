#include "quadrl/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrl/sim.hpp"

namespace quadrl {

void Trajectory::validate() const {
  if (waypoints.size() < 2) throw std::invalid_argument("trajectory: need at least two waypoints");
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    if (waypoints[i] == waypoints[i - 1])
      throw std::invalid_argument("trajectory: consecutive waypoints must be distinct");
  if (reach_radius <= 0) throw std::invalid_argument("trajectory: reach radius must be positive");
}

TrajectoryKind parse_trajectory_kind(const std::string& s) {
  if (s == "line") return TrajectoryKind::line;
  if (s == "circle") return TrajectoryKind::circle;
  if (s == "eight") return TrajectoryKind::eight;
  throw std::invalid_argument("trajectory: unknown kind '" + s + "'");
}

Trajectory build_line(double length) {
  if (length <= 0) throw std::invalid_argument("trajectory: length must be positive");
  Trajectory t;
  t.name = "line";
  t.waypoints = {{0.0, 0.0}, {length, 0.0}};
  t.validate();
  return t;
}

Trajectory build_circle(double radius, int n) {
  if (radius <= 0 || n < 2) throw std::invalid_argument("trajectory: bad circle parameters");
  Trajectory t;
  t.name = "circle";
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * k / n;
    t.waypoints.push_back({radius * std::cos(phi), radius * std::sin(phi)});
  }
  t.validate();
  return t;
}

Trajectory build_eight(double radius, int waypoints_total) {
  if (radius <= 0 || waypoints_total < 4)
    throw std::invalid_argument("trajectory: bad figure-eight parameters");
  Trajectory t;
  t.name = "eight";
  const int per_lobe = waypoints_total / 2;
  // Right lobe: circle centered (radius, 0), clockwise from the origin.
  for (int k = 1; k <= per_lobe; ++k) {
    const double phi = M_PI - 2.0 * M_PI * k / per_lobe;
    t.waypoints.push_back({radius + radius * std::cos(phi), radius * std::sin(phi)});
  }
  // Left lobe: circle centered (-radius, 0), counterclockwise from the origin.
  for (int k = 1; k <= per_lobe; ++k) {
    const double phi = 2.0 * M_PI * k / per_lobe;
    t.waypoints.push_back({-radius + radius * std::cos(phi), radius * std::sin(phi)});
  }
  t.validate();
  return t;
}

std::optional<double> heading_to_waypoint(double x, double y, double wx, double wy) {
  if (x == wx && y == wy) return std::nullopt;
  return wrap_angle(std::atan2(wy - y, wx - x));
}

std::vector<double> polyline_turning_angles(const std::vector<std::array<double, 2>>& pts) {
  std::vector<double> angles;
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const double h0 = std::atan2(pts[i - 1][1] - pts[i - 2][1], pts[i - 1][0] - pts[i - 2][0]);
    const double h1 = std::atan2(pts[i][1] - pts[i - 1][1], pts[i][0] - pts[i - 1][0]);
    angles.push_back(wrap_angle(h1 - h0));
  }
  return angles;
}

}  // namespace quadrl
