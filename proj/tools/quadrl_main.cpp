#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadrl/config.hpp"
#include "quadrl/trainer.hpp"
#include "quadrl/validation.hpp"
#include "quadrl/wire/server.hpp"

namespace {

using namespace quadrl;

RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return load_run_config(path);
}

ResetStrategy strategy_by_name(const std::string& name) {
  ResetStrategy s;
  if (name == "yaw")
    s.kind = ResetStrategy::Kind::to_yaw;
  else if (name == "uniform")
    s.kind = ResetStrategy::Kind::uniform;
  else if (name == "normal")
    s.kind = ResetStrategy::Kind::normal;
  else
    throw CLI::ValidationError("--strategies", "unknown strategy '" + name + "'");
  return s;
}

int cmd_train(const std::string& config_path, std::uint64_t seed, bool seed_given,
              const std::string& out_dir, bool stub_updates) {
  RunConfig cfg = load_config_or_default(config_path);
  if (seed_given) cfg.train.master_seed = seed;
  TrainOutputs out = train_run(cfg, out_dir, nullptr, stub_updates);
  std::printf("run complete: %ld steps, %ld interventions, metrics at %s\n",
              out.metrics.total_env_steps, out.metrics.total_interventions,
              out.metrics_csv_path.c_str());
  if (!out.best_checkpoint.empty())
    std::printf("best checkpoint: %s\n", out.best_checkpoint.c_str());
  return 0;
}

int cmd_evaluate(const std::string& checkpoint, const std::string& trajectory_name,
                 const std::string& config_path, const std::string& out_dir) {
  RunConfig cfg = load_config_or_default(config_path);
  PolicyBundle policy = load_policy_bundle(checkpoint);

  SimParams sim_params = cfg.sim;
  sim_params.obs = policy.obs;  // run the sim the policy was trained against
  QuadSim sim(sim_params, 0);
  sim.set_noise_enabled(false);

  Trajectory traj = build_trajectory(parse_trajectory_kind(trajectory_name), cfg.validation);
  ValidationReport report = run_validation(policy, traj, sim, cfg.validation);

  const std::string ckpt_stem = std::filesystem::path(checkpoint).stem().string();
  const std::string stem = trajectory_name + "_" + ckpt_stem;
  ReportPaths paths = emit_report(report, traj, cfg.train.platform, out_dir, stem);
  append_validation_summary(
      (std::filesystem::path(out_dir) / "validation_summary.csv").string(), report, ckpt_stem);

  std::printf("%s on %s: %s, %d/%d waypoints, %zu interventions, mean cross-track %.3f m\n",
              ckpt_stem.c_str(), trajectory_name.c_str(),
              report.completed ? "completed" : "not completed", report.waypoints_reached,
              report.total_waypoints, report.interventions.size(), report.mean_cross_track);
  std::printf("wrote %s and %s\n", paths.csv.c_str(), paths.svg.c_str());
  return report.completed ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& strategies_csv, int seeds,
              const std::string& out_dir) {
  RunConfig base = load_config_or_default(config_path);
  std::vector<std::string> names;
  std::string cur;
  for (char c : strategies_csv + ",") {
    if (c == ',') {
      if (!cur.empty()) names.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  for (const std::string& name : names) {
    for (int seed = 1; seed <= seeds; ++seed) {
      RunConfig cfg = base;
      const ResetStrategy parsed = strategy_by_name(name);
      cfg.train.strategy.kind = parsed.kind;
      cfg.train.master_seed = static_cast<std::uint64_t>(seed);
      const std::string run_dir =
          (std::filesystem::path(out_dir) / (name + "_s" + std::to_string(seed))).string();
      std::printf("=== %s seed %d -> %s\n", name.c_str(), seed, run_dir.c_str());
      TrainOutputs out = train_run(cfg, run_dir);
      if (out.best_checkpoint.empty()) continue;

      PolicyBundle policy = load_policy_bundle(out.best_checkpoint);
      for (const char* course : {"line", "circle", "eight"}) {
        SimParams sim_params = cfg.sim;
        sim_params.obs = policy.obs;
        QuadSim sim(sim_params, 0);
        Trajectory traj = build_trajectory(parse_trajectory_kind(course), cfg.validation);
        ValidationReport report = run_validation(policy, traj, sim, cfg.validation);
        emit_report(report, traj, cfg.train.platform, run_dir,
                    std::string(course) + "_best");
        append_validation_summary(
            (std::filesystem::path(out_dir) / "sweep_summary.csv").string(), report,
            name + "_s" + std::to_string(seed));
        std::printf("  %s: %d/%d waypoints%s\n", course, report.waypoints_reached,
                    report.total_waypoints, report.completed ? " (completed)" : "");
      }
    }
  }
  return 0;
}

int cmd_serve(const std::string& config_path, const std::string& listen) {
  RunConfig cfg = load_config_or_default(config_path);
  std::string host = cfg.wire.host;
  std::uint16_t port = cfg.wire.port;
  if (!listen.empty()) {
    const auto colon = listen.rfind(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--listen", "expected host:port");
    host = listen.substr(0, colon);
    port = static_cast<std::uint16_t>(std::stoi(listen.substr(colon + 1)));
  }
  QuadSim sim(cfg.sim, derive_seed(cfg.train.master_seed, "sim"));
  wire::EnvServer server(sim, host, port);
  std::printf("serving simulator on %s:%u\n", host.c_str(), server.port());
  server.serve_forever();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale directional-locomotion RL lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", checkpoint, trajectory = "line";
  std::string strategies = "yaw,uniform,normal", listen;
  std::uint64_t seed = 0;
  int seeds = 3;
  bool stub_updates = false;

  auto* train = app.add_subcommand("train", "Run one training run");
  train->add_option("--config", config_path, "Run configuration file");
  auto* seed_opt = train->add_option("--seed", seed, "Master seed (overrides config)");
  train->add_option("--out", out_dir, "Output directory");
  train->add_flag("--stub-updates", stub_updates, "Skip gradient math (step accounting only)");

  auto* evaluate = app.add_subcommand("evaluate", "Validate a checkpoint on a trajectory");
  evaluate->add_option("--checkpoint", checkpoint, "Policy checkpoint file")->required();
  evaluate->add_option("--trajectory", trajectory, "line, circle or eight")->required();
  evaluate->add_option("--config", config_path, "Run configuration file");
  evaluate->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Train strategies x seeds, then validate each");
  sweep->add_option("--strategies", strategies, "Comma list of yaw,uniform,normal");
  sweep->add_option("--seeds", seeds, "Seeds per strategy (1..k)");
  sweep->add_option("--config", config_path, "Run configuration file");
  sweep->add_option("--out", out_dir, "Output directory");

  auto* serve = app.add_subcommand("serve", "Serve the simulator over TCP");
  serve->add_option("--config", config_path, "Run configuration file");
  serve->add_option("--listen", listen, "host:port (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, seed, seed_opt->count() > 0, out_dir, stub_updates);
    if (evaluate->parsed()) return cmd_evaluate(checkpoint, trajectory, config_path, out_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, strategies, seeds, out_dir);
    if (serve->parsed()) return cmd_serve(config_path, listen);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
