#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "quadrl/config.hpp"
#include "quadrl/sim.hpp"
#include "quadrl/trainer.hpp"
#include "quadrl/trajectory.hpp"

namespace quadrl {

struct TraceRow {
  double t = 0.0;
  double x = 0.0, y = 0.0;
  double yaw = 0.0;
  double heading = 0.0;
  int active_waypoint = 0;
};

struct InterventionMark {
  double t = 0.0;
  double x = 0.0, y = 0.0;
};

struct ValidationReport {
  std::string trajectory_name;
  bool completed = false;
  int waypoints_reached = 0;
  int total_waypoints = 0;
  std::vector<TraceRow> trace;
  std::vector<InterventionMark> interventions;
  double mean_cross_track = 0.0;
  double elapsed_sim_time = 0.0;
};

Trajectory build_trajectory(TrajectoryKind kind, const ValidationConfig& vc);

/// The world surface the course runner needs: any stepped agent with a pose,
/// a clock and a heading command. Lets the harness be sanity-checked with a
/// synthetic perfect walker.
struct CourseWorld {
  std::function<void(double theta)> set_heading;
  std::function<void()> step;  // advance one control period under the policy
  std::function<std::array<double, 2>()> position;
  std::function<double()> yaw;
  std::function<double()> time;
};

/// Course logic shared by every validation run: heading refresh toward the
/// active waypoint every heading_period seconds of world time, waypoint
/// consumption within reach_radius, and stall detection (net displacement
/// below stall_min_displacement across a stall window logs an intervention
/// and refreshes the heading immediately).
ValidationReport run_course(CourseWorld& world, const Trajectory& trajectory,
                            const ValidationConfig& vc);

/// Runs the trained policy against the course with sim noise disabled.
/// Platform bounds are ignored; courses are sized to fit.
ValidationReport run_validation(const PolicyBundle& policy, const Trajectory& trajectory,
                                QuadSim& sim, const ValidationConfig& vc);

/// Perpendicular distance from (x, y) to the segment a-b.
double cross_track_distance(double x, double y, const std::array<double, 2>& a,
                            const std::array<double, 2>& b);

struct ReportPaths {
  std::string csv;
  std::string svg;
};

/// CSV of (t, x, y, yaw, theta, active_waypoint) plus the SVG overlay of
/// waypoints, reach circles, path and intervention markers, bounded to the
/// platform extent. Returns the file paths written.
ReportPaths emit_report(const ValidationReport& report, const Trajectory& trajectory,
                        const Platform& platform, const std::string& out_dir,
                        const std::string& stem);

/// Appends (with a header when the file is new) to validation_summary.csv.
void append_validation_summary(const std::string& summary_path, const ValidationReport& report,
                               const std::string& checkpoint_name);

}  // namespace quadrl
