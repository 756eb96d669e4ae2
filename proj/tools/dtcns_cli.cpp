// Command-line front end: train policies, run scenarios and sweeps, render
// plots, verify outputs and print the effective defaults.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dtcns/config_io.hpp"
#include "dtcns/errors.hpp"
#include "dtcns/experiment.hpp"
#include "dtcns/plot.hpp"
#include "dtcns/policy_file.hpp"
#include "dtcns/training.hpp"

namespace fs = std::filesystem;
using namespace dtcns;

namespace {

std::string default_output_root() {
  const char* env = std::getenv("DTCNS_OUTPUT_ROOT");
  return env && *env ? env : "dtcns-out";
}

nlohmann::json load_or_empty(const std::string& path) {
  return path.empty() ? nlohmann::json::object() : read_json_file(path);
}

int cmd_train(const std::string& style_name, const std::string& config_path, std::uint64_t seed,
              std::string out_root, std::string cop_policy, bool quiet) {
  const Style style = parse_style(style_name);
  if (style == Style::Ignorant) throw ConfigError("ignorant nodes act randomly and are not trained");
  const auto kind = style == Style::Cooperative ? PolicyKind::Cooperative : PolicyKind::Egocentric;
  const auto file = training_config_from_json(load_or_empty(config_path), kind);
  if (out_root.empty()) out_root = default_output_root();
  const fs::path root(out_root);
  fs::create_directories(root / "policies");

  TrainingScenario scenario;
  scenario.sim = file.sim;
  scenario.kind = kind;
  if (kind == PolicyKind::Egocentric) {
    if (cop_policy.empty()) cop_policy = (root / "policies" / "cooperative.policy").string();
    if (!fs::exists(cop_policy))
      throw ConfigError("egocentric training needs " + cop_policy +
                        " (run `dtcns train --style cop` first)");
    scenario.cooperative_actor = load_policy(cop_policy).actor;
  }
  auto progress = [&](const TrainingCurveRow& r) {
    if (!quiet && (r.episode % 10 == 0))
      std::fprintf(stderr, "episode %4d  steps %6ld  return %10.4f  critic %.4g  actor %.4g\n",
                   r.episode, r.env_steps, r.mean_return, r.critic_loss, r.actor_loss);
  };
  const auto result = train(scenario, file.td3, seed, progress);
  const auto name = std::string(to_string(kind));
  const auto policy_path = (root / "policies" / (name + ".policy")).string();
  save_policy(policy_path, result.policy);
  const auto curve_path = (root / ("training_" + name + ".csv")).string();
  std::ofstream curve(curve_path);
  if (!curve) throw IoError("cannot open for writing", curve_path);
  write_curve_csv(curve, result.curve);
  std::cout << "wrote " << policy_path << "\nwrote " << curve_path << '\n';
  return 0;
}

ExperimentConfig load_experiment(const std::string& path) {
  auto j = read_json_file(path);
  if (!j.contains("output_dir")) j["output_dir"] = default_output_root();
  return experiment_config_from_json(j);
}

int cmd_sweep(const ExperimentConfig& cfg) {
  const auto policies = load_policies(cfg.policies_dir, cfg.scenarios);
  const auto cells = run_resilience_sweep(cfg, policies);
  for (const auto& row : aggregate(cells))
    std::printf("%-24s zeta=%-5g rt=%-3g infections mean %8.2f [%g, %g]  reward mean %10.3f\n",
                row.scenario.c_str(), row.point.zeta, row.point.recovery_days,
                row.infections_mean, row.infections_min, row.infections_max, row.reward_mean);
  std::cout << "results in " << cfg.output_dir << '\n';
  return 0;
}

int cmd_plot(const std::string& in_dir, const std::string& out_dir) {
  const auto path = (fs::path(in_dir) / "daily.csv").string();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open result table", path);
  const auto files = emit_plots(read_daily_csv(in), out_dir);
  for (const auto& f : files) std::cout << f << '\n';
  return 0;
}

int cmd_verify(const std::string& in_dir) {
  const auto report = verify_outputs(in_dir);
  for (const auto& p : report.problems) std::cout << "MISMATCH " << p << '\n';
  std::cout << "checked " << report.traces_checked << " traces: "
            << (report.ok() ? "OK" : "FAILED") << '\n';
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal social-network epidemic simulator with reinforcement-learning agents"};
  app.require_subcommand(1);

  std::string style, config_path, out_root, cop_policy;
  std::uint64_t seed = 1;
  bool quiet = false;
  auto* train_cmd = app.add_subcommand("train", "Train the cooperative or egocentric policy");
  train_cmd->add_option("--style", style, "cop or ego")->required();
  train_cmd->add_option("--config", config_path, "JSON file with optional sim/td3 sections");
  train_cmd->add_option("--seed", seed, "training seed");
  train_cmd->add_option("--out", out_root, "output root (default $DTCNS_OUTPUT_ROOT or dtcns-out)");
  train_cmd->add_option("--cop-policy", cop_policy, "cooperative policy used by the other nodes");
  train_cmd->add_flag("--quiet", quiet, "no progress output");

  std::string scenario_path;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the scenarios of a file for one seed");
  sim_cmd->add_option("--scenario", scenario_path, "experiment JSON file")->required();
  sim_cmd->add_option("--seed", seed, "replicate seed")->required();

  int jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every scenario, grid cell and seed");
  sweep_cmd->add_option("--config", config_path, "experiment JSON file")->required();
  sweep_cmd->add_option("--jobs", jobs, "worker threads (overrides the file)");

  std::string in_dir, out_dir;
  auto* plot_cmd = app.add_subcommand("plot", "Render SVG charts from a results directory");
  plot_cmd->add_option("--in", in_dir, "results directory containing daily.csv")->required();
  plot_cmd->add_option("--out", out_dir, "plot directory")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Recompute summaries from traces and diff");
  verify_cmd->add_option("--in", in_dir, "results directory")->required();

  auto* config_cmd = app.add_subcommand("config", "Configuration utilities");
  config_cmd->require_subcommand(1);
  config_cmd->add_subcommand("dump", "Print every effective default parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return cmd_train(style, config_path, seed, out_root, cop_policy, quiet);
    if (*sim_cmd) {
      auto cfg = load_experiment(scenario_path);
      cfg.seeds = {seed};
      return cmd_sweep(cfg);
    }
    if (*sweep_cmd) {
      auto cfg = load_experiment(config_path);
      if (jobs > 0) cfg.jobs = jobs;
      return cmd_sweep(cfg);
    }
    if (*plot_cmd) return cmd_plot(in_dir, out_dir);
    if (*verify_cmd) return cmd_verify(in_dir);
    if (*config_cmd) {
      dump_defaults(std::cout);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
