// mptcp-lab: multipath rate-control stability experiments.
//
//   mptcp-lab preset <internet|datacenter|wireless> [--out FILE]
//   mptcp-lab validate <config.json>
//   mptcp-lab run <config.json> [--seed N] [--format json|csv] [--out FILE]
//                 [--trajectory-out FILE]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mptcplab/config_io.hpp"
#include "mptcplab/experiment.hpp"
#include "mptcplab/report_io.hpp"

namespace {

int do_preset(const std::string& name, const std::string& out) {
  try {
    mptcplab::ExperimentConfig cfg = mptcplab::preset(name);
    if (out == "-")
      std::cout << mptcplab::config_to_json(cfg);
    else
      mptcplab::save_config(cfg, out);
  } catch (const mptcplab::UnknownPreset& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mptcplab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int do_validate(const std::string& path) {
  try {
    mptcplab::load_config(path);
  } catch (const mptcplab::Error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return 1;
  }
  std::cout << "ok\n";
  return 0;
}

int do_run(const std::string& path, std::optional<std::uint64_t> seed,
           const std::string& format, const std::string& out,
           const std::string& trajectory_out) {
  mptcplab::ExperimentConfig cfg;
  try {
    cfg = mptcplab::load_config(path);
    mptcplab::apply_seed_overrides(cfg, seed);
    if (format != "json" && format != "csv")
      throw mptcplab::ConfigError("--format must be json or csv");
  } catch (const mptcplab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    mptcplab::EnsembleSummary summary = mptcplab::run_experiment(cfg);
    mptcplab::emit_report(summary, cfg,
                          format == "csv" ? mptcplab::ReportFormat::Csv
                                          : mptcplab::ReportFormat::Json,
                          out);
    if (!trajectory_out.empty()) {
      mptcplab::Network net = mptcplab::build_member_network(cfg, 0);
      mptcplab::Trajectory traj = mptcplab::member_trajectory(cfg, 0);
      mptcplab::write_trajectory_csv(traj, net, trajectory_out);
    }
  } catch (const mptcplab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mptcplab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipath rate-control stability lab"};
  app.require_subcommand(1);

  auto* preset_cmd = app.add_subcommand("preset", "Emit a calibrated config");
  std::string preset_name;
  std::string preset_out = "-";
  preset_cmd->add_option("name", preset_name, "internet|datacenter|wireless")
      ->required();
  preset_cmd->add_option("--out", preset_out, "Output file (default stdout)");

  auto* validate_cmd =
      app.add_subcommand("validate", "Check a config file and exit");
  std::string validate_path;
  validate_cmd->add_option("config", validate_path, "Config JSON file")
      ->required();

  auto* run_cmd = app.add_subcommand("run", "Run an experiment ensemble");
  std::string run_path;
  std::string run_format = "json";
  std::string run_out = "-";
  std::string run_traj_out;
  std::uint64_t run_seed = 0;
  run_cmd->add_option("config", run_path, "Config JSON file")->required();
  auto* seed_opt =
      run_cmd->add_option("--seed", run_seed, "Override the config seed");
  run_cmd->add_option("--format", run_format, "json|csv (default json)");
  run_cmd->add_option("--out", run_out, "Report file (default stdout)");
  run_cmd->add_option("--trajectory-out", run_traj_out,
                      "Also export member 0's dynamics as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (preset_cmd->parsed()) return do_preset(preset_name, preset_out);
  if (validate_cmd->parsed()) return do_validate(validate_path);
  std::optional<std::uint64_t> seed;
  if (seed_opt->count() > 0) seed = run_seed;
  return do_run(run_path, seed, run_format, run_out, run_traj_out);
}
