#include "quadrl/validation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "quadrl/numfmt.hpp"
#include "quadrl/svg.hpp"

namespace quadrl {

Trajectory build_trajectory(TrajectoryKind kind, const ValidationConfig& vc) {
  Trajectory t;
  switch (kind) {
    case TrajectoryKind::line: t = build_line(vc.line_length); break;
    case TrajectoryKind::circle: t = build_circle(vc.circle_radius, vc.circle_waypoints); break;
    case TrajectoryKind::eight: t = build_eight(vc.eight_radius, vc.eight_waypoints); break;
  }
  t.reach_radius = vc.reach_radius;
  t.heading_period = vc.heading_period;
  t.validate();
  return t;
}

double cross_track_distance(double x, double y, const std::array<double, 2>& a,
                            const std::array<double, 2>& b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  const double wx = x - a[0], wy = y - a[1];
  const double len2 = vx * vx + vy * vy;
  double s = len2 > 0.0 ? (wx * vx + wy * vy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  const double dx = wx - s * vx, dy = wy - s * vy;
  return std::sqrt(dx * dx + dy * dy);
}

ValidationReport run_course(CourseWorld& world, const Trajectory& trajectory,
                            const ValidationConfig& vc) {
  trajectory.validate();

  ValidationReport report;
  report.trajectory_name = trajectory.name;
  report.total_waypoints = static_cast<int>(trajectory.waypoints.size());

  const double t_start = world.time();
  int active = 0;

  auto dist_to = [&](const std::array<double, 2>& w) {
    const auto p = world.position();
    return std::hypot(w[0] - p[0], w[1] - p[1]);
  };

  // Consumes any waypoint we already sit on; points theta at the next one.
  auto refresh_heading = [&] {
    while (active < report.total_waypoints) {
      const auto p = world.position();
      auto h = heading_to_waypoint(p[0], p[1], trajectory.waypoints[active][0],
                                   trajectory.waypoints[active][1]);
      if (h) {
        world.set_heading(*h);
        return;
      }
      ++active;  // coincident: advance-waypoint signal
      ++report.waypoints_reached;
    }
  };

  // Remember commanded headings for the trace.
  double heading = 0.0;
  const auto raw_set_heading = world.set_heading;
  world.set_heading = [&heading, raw_set_heading](double theta) {
    heading = theta;
    raw_set_heading(theta);
  };

  refresh_heading();
  double next_heading_refresh = t_start + trajectory.heading_period;
  double stall_anchor_t = t_start;
  auto stall_anchor = world.position();
  const std::array<double, 2> start_pos = world.position();

  double cross_track_sum = 0.0;
  long cross_track_count = 0;

  while (active < report.total_waypoints && world.time() - t_start < vc.max_time) {
    world.step();
    const auto p = world.position();
    const double now = world.time();
    report.trace.push_back({now - t_start, p[0], p[1], world.yaw(), heading, active});

    const std::array<double, 2>& seg_start =
        active == 0 ? start_pos : trajectory.waypoints[active - 1];
    cross_track_sum += cross_track_distance(p[0], p[1], seg_start, trajectory.waypoints[active]);
    ++cross_track_count;

    while (active < report.total_waypoints &&
           dist_to(trajectory.waypoints[active]) <= trajectory.reach_radius) {
      ++active;
      ++report.waypoints_reached;
    }
    if (active >= report.total_waypoints) break;

    // Stall: barely any net displacement across the watch window. Counts as
    // an intervention and re-aims the heading right away.
    if (now - stall_anchor_t >= vc.stall_window) {
      if (std::hypot(p[0] - stall_anchor[0], p[1] - stall_anchor[1]) <
          vc.stall_min_displacement) {
        report.interventions.push_back({now - t_start, p[0], p[1]});
        refresh_heading();
        next_heading_refresh = now + trajectory.heading_period;
      }
      stall_anchor_t = now;
      stall_anchor = p;
    }

    if (now >= next_heading_refresh) {
      refresh_heading();
      next_heading_refresh += trajectory.heading_period;
    }
  }

  report.completed = report.waypoints_reached == report.total_waypoints;
  report.elapsed_sim_time = world.time() - t_start;
  report.mean_cross_track = cross_track_count ? cross_track_sum / cross_track_count : 0.0;
  return report;
}

ValidationReport run_validation(const PolicyBundle& policy, const Trajectory& trajectory,
                                QuadSim& sim, const ValidationConfig& vc) {
  if (policy.obs.dim() != sim.params().obs.dim())
    throw std::runtime_error("validation: checkpoint observation arity (" +
                             std::to_string(policy.obs.dim()) + ") does not match simulator (" +
                             std::to_string(sim.params().obs.dim()) + ")");
  sim.set_noise_enabled(false);

  GruEncoder encoder = policy.encoder;
  encoder.reset();
  Rng no_noise(0);  // deterministic select_action draws nothing

  Vec obs = sim.observe();
  CourseWorld world;
  world.set_heading = [&sim](double theta) { sim.set_heading(theta); };
  world.step = [&] {
    Vec z;
    const Vec& h = encoder.step(obs);
    z.reserve(h.size() + obs.size());
    z.insert(z.end(), h.begin(), h.end());
    z.insert(z.end(), obs.begin(), obs.end());
    const Vec action = policy.agent.select_action(z, false, no_noise);
    obs = sim.step(action).obs;
  };
  world.position = [&sim] {
    return std::array<double, 2>{sim.state().x, sim.state().y};
  };
  world.yaw = [&sim] { return sim.state().yaw; };
  world.time = [&sim] { return sim.state().sim_time; };

  return run_course(world, trajectory, vc);
}

ReportPaths emit_report(const ValidationReport& report, const Trajectory& trajectory,
                        const Platform& platform, const std::string& out_dir,
                        const std::string& stem) {
  namespace fs = std::filesystem;
  if (report.trace.empty()) throw std::runtime_error("report: empty trace");
  fs::create_directories(out_dir);
  ReportPaths paths;
  paths.csv = (fs::path(out_dir) / (stem + ".csv")).string();
  paths.svg = (fs::path(out_dir) / (stem + ".svg")).string();

  {
    std::ofstream out(paths.csv, std::ios::binary);
    if (!out) throw std::runtime_error("report: cannot open " + paths.csv);
    out << "t,x,y,yaw,theta,active_waypoint\n";
    for (const TraceRow& r : report.trace)
      out << format_double(r.t) << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
          << format_double(r.yaw) << ',' << format_double(r.heading) << ',' << r.active_waypoint
          << '\n';
    if (!out) throw std::runtime_error("report: write failed for " + paths.csv);
  }

  const double hx = platform.length * 0.5, hy = platform.width * 0.5;
  SvgPlot plot(-hx, -hy, hx, hy);
  plot.rect(-hx, -hy, hx, hy, "black");
  for (const auto& w : trajectory.waypoints) {
    plot.circle(w[0], w[1], trajectory.reach_radius, "#bbbbbb");
    plot.circle(w[0], w[1], 0.01, "blue", "blue");
  }
  std::vector<std::array<double, 2>> path;
  path.reserve(report.trace.size());
  for (const TraceRow& r : report.trace) path.push_back({r.x, r.y});
  plot.polyline(path, "green");
  for (const InterventionMark& m : report.interventions) plot.intervention_marker(m.x, m.y);
  plot.text(-hx + 0.05, hy - 0.12, report.trajectory_name);
  plot.save(paths.svg);
  return paths;
}

void append_validation_summary(const std::string& summary_path, const ValidationReport& report,
                               const std::string& checkpoint_name) {
  const bool fresh = !std::filesystem::exists(summary_path);
  std::ofstream out(summary_path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("report: cannot open " + summary_path);
  if (fresh)
    out << "trajectory,checkpoint,completed,waypoints_reached,interventions,mean_cross_track,"
           "sim_time\n";
  out << report.trajectory_name << ',' << checkpoint_name << ',' << (report.completed ? 1 : 0)
      << ',' << report.waypoints_reached << ',' << report.interventions.size() << ','
      << format_double(report.mean_cross_track) << ',' << format_double(report.elapsed_sim_time)
      << '\n';
}

}  // namespace quadrl
