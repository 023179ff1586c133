#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mptcplab/dynamics.hpp"
#include "mptcplab/net_model.hpp"
#include "mptcplab/stability.hpp"
#include "mptcplab/traffic.hpp"

namespace mptcplab {

struct SolverSettings {
  double baseline_tol = 1e-8;
  double multipath_tol = 1e-8;
};

struct DynamicsSettings {
  double horizon = 10.0;
  double dt = 1e-3;
  double convergence_tol = 1e-4;
};

struct StabilitySettings {
  double eps = 1e-3;
  // B_max expressed as a fraction of the member network's total capacity so
  // the bound tracks randomized topologies; resolved to an absolute
  // StabilityConfig per run.
  double burden_bound_fraction = 0.5;
  double displacement_tol = 1e18;
  double window = 0.0;
};

struct ExperimentConfig {
  ScenarioSpec scenario;  // scenario.seed is overwritten per member
  ControllerKind controller;
  TrafficModel traffic;
  StabilitySettings stability;
  SolverSettings solver;
  DynamicsSettings dynamics;
  int ensemble_size = 1;
  std::uint64_t seed = 0;
};

/// Throws ConfigError when any nested invariant fails.
void validate(const ExperimentConfig& cfg);

struct RunResult {
  int run_id = 0;
  std::optional<StabilityReport> report;  // empty on error
  std::string error;                      // empty on success
};

struct EnsembleSummary {
  std::vector<RunResult> runs;
  double fraction_stable = 0.0;
  double displacement_min = 0.0;
  double displacement_median = 0.0;
  double displacement_max = 0.0;
};

/// Runs ensemble_size members. Member i builds its scenario with seed + i,
/// solves the single-path baseline x*, obtains the multipath equilibrium
/// (direct solver under Constant traffic, controller dynamics under OnOff
/// with per-source burst phases drawn from the member seed) and assesses
/// stability. A failing member is recorded with its error and never affects
/// the others. Fully deterministic given (cfg, seed).
EnsembleSummary run_experiment(const ExperimentConfig& cfg);

/// Calibrated default configuration per scenario class:
/// "internet", "datacenter" (OnOff bursty traffic) or "wireless"
/// (multi-interface devices with a positive energy weight).
ExperimentConfig preset(const std::string& name);  // UnknownPreset

/// The utility-maximization program matching a controller variant:
/// SinglePath -> solve_baseline, CoupledMultipath -> solve_multipath,
/// UncoupledMultipath -> solve_multipath_uncoupled.
SolverReport solve_for_controller(const Network& net, const ControllerKind& kind,
                                  double eps, double tol);

/// Reproduce a member's inputs, e.g. for trajectory export or calibration.
Network build_member_network(const ExperimentConfig& cfg, int run_id);
std::vector<double> member_phases(const ExperimentConfig& cfg,
                                  std::size_t n_sources, int run_id);
Trajectory member_trajectory(const ExperimentConfig& cfg, int run_id);

}  // namespace mptcplab
