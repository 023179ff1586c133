#include "mptcplab/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "mptcplab/rng.hpp"

namespace mptcplab {

namespace {

// Salt separating the burst-phase stream from the topology stream.
constexpr std::uint64_t kPhaseSalt = 0x9E3779B97F4A7C15ULL;

void rethrow_as_config(const char* what) { throw ConfigError(what); }

}  // namespace

void validate(const ExperimentConfig& cfg) {
  try {
    // Cheap structural checks; the generator re-validates on every build.
    if (cfg.ensemble_size < 1) rethrow_as_config("ensemble_size must be >= 1");
    if (!(cfg.controller.gain > 0.0))
      rethrow_as_config("controller gain must be positive");
    if (!(cfg.controller.barrier_beta > 0.0))
      rethrow_as_config("controller barrier_beta must be positive");
    validate(cfg.traffic);
    if (!(cfg.stability.eps > 0.0))
      rethrow_as_config("stability eps must be positive");
    if (!(cfg.stability.burden_bound_fraction > 0.0))
      rethrow_as_config("burden_bound_fraction must be positive");
    if (!(cfg.stability.displacement_tol >= 0.0))
      rethrow_as_config("displacement_tol must be nonnegative");
    if (!(cfg.solver.baseline_tol > 0.0) || !(cfg.solver.multipath_tol > 0.0))
      rethrow_as_config("solver tolerances must be positive");
    if (!(cfg.dynamics.dt > 0.0) || cfg.dynamics.dt > cfg.dynamics.horizon)
      rethrow_as_config("dynamics needs 0 < dt <= horizon");
    if (!(cfg.dynamics.convergence_tol > 0.0))
      rethrow_as_config("dynamics convergence_tol must be positive");

    ScenarioSpec probe = cfg.scenario;
    probe.seed = cfg.seed;
    build_scenario(probe);  // InvalidSpec -> ConfigError below
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

SolverReport solve_for_controller(const Network& net, const ControllerKind& kind,
                                  double eps, double tol) {
  switch (kind.variant) {
    case ControllerVariant::SinglePath:
      return solve_baseline(net, tol);
    case ControllerVariant::UncoupledMultipath:
      return solve_multipath_uncoupled(net, eps, tol);
    case ControllerVariant::CoupledMultipath:
      return solve_multipath(net, eps, tol);
  }
  throw InvalidSpec("unreachable controller variant");
}

Network build_member_network(const ExperimentConfig& cfg, int run_id) {
  ScenarioSpec spec = cfg.scenario;
  spec.seed = cfg.seed + static_cast<std::uint64_t>(run_id);
  return build_scenario(spec);
}

std::vector<double> member_phases(const ExperimentConfig& cfg,
                                  std::size_t n_sources, int run_id) {
  if (cfg.traffic.kind == TrafficModel::Kind::Constant) return {};
  // Independent per-source burst phases: staggered demand is what makes the
  // ensemble nondegenerate on deterministic topologies.
  Rng rng((cfg.seed + static_cast<std::uint64_t>(run_id)) ^ kPhaseSalt);
  std::vector<double> phases(n_sources);
  for (double& ph : phases) ph = rng.uniform(0.0, cfg.traffic.period);
  return phases;
}

namespace {

IntegrationConfig member_integration_config(const ExperimentConfig& cfg,
                                            const Network& net, int run_id) {
  IntegrationConfig ic;
  ic.horizon = cfg.dynamics.horizon;
  ic.dt = cfg.dynamics.dt;
  ic.tol = cfg.dynamics.convergence_tol;
  ic.traffic = cfg.traffic;
  ic.source_phases = member_phases(cfg, net.sources().size(), run_id);
  ic.rate_floor = cfg.stability.eps / 10.0;
  return ic;
}

}  // namespace

Trajectory member_trajectory(const ExperimentConfig& cfg, int run_id) {
  Network net = build_member_network(cfg, run_id);
  return integrate(cfg.controller, net,
                   member_integration_config(cfg, net, run_id));
}

EnsembleSummary run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);

  EnsembleSummary out;
  out.runs.reserve(static_cast<std::size_t>(cfg.ensemble_size));
  int stable = 0;
  std::vector<double> displacements;

  for (int i = 0; i < cfg.ensemble_size; ++i) {
    RunResult rr;
    rr.run_id = i;
    try {
      Network net = build_member_network(cfg, i);
      StabilityConfig scfg;
      scfg.eps = cfg.stability.eps;
      scfg.burden_bound =
          cfg.stability.burden_bound_fraction * net.total_capacity();
      scfg.displacement_tol = cfg.stability.displacement_tol;
      scfg.window = cfg.stability.window;

      SolverReport base = solve_baseline(net, cfg.solver.baseline_tol);

      StabilityReport rep;
      if (cfg.traffic.kind == TrafficModel::Kind::Constant) {
        SolverReport multi = solve_for_controller(
            net, cfg.controller, cfg.stability.eps, cfg.solver.multipath_tol);
        rep = assess(net, base.allocation, multi.allocation, scfg);
      } else {
        Trajectory traj = integrate(cfg.controller, net,
                                    member_integration_config(cfg, net, i));
        rep = assess_time_varying(net, base.allocation, traj, scfg);
      }
      if (rep.classification == Classification::Stable) ++stable;
      displacements.push_back(rep.displacement);
      rr.report = rep;
    } catch (const Error& e) {
      rr.error = e.what();
    }
    out.runs.push_back(std::move(rr));
  }

  out.fraction_stable =
      static_cast<double>(stable) / static_cast<double>(cfg.ensemble_size);
  if (!displacements.empty()) {
    std::sort(displacements.begin(), displacements.end());
    out.displacement_min = displacements.front();
    out.displacement_max = displacements.back();
    std::size_t n = displacements.size();
    out.displacement_median =
        n % 2 == 1 ? displacements[n / 2]
                   : 0.5 * (displacements[n / 2 - 1] + displacements[n / 2]);
  }
  return out;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "internet") {
    InternetSpec s;
    s.n_sources = 12;
    s.n_links = 30;
    s.paths_per_source = 2;
    s.capacity_min = 8.0;
    s.capacity_max = 16.0;
    cfg.scenario.params = s;
    cfg.controller = {ControllerVariant::CoupledMultipath, 40.0, 1e-3};
    cfg.traffic.kind = TrafficModel::Kind::Constant;
    cfg.stability = {1e-3, 0.5, 80.0, 0.0};
    cfg.solver = {1e-7, 1e-7};
    cfg.dynamics = {150.0, 1e-4, 1e-4};
    cfg.ensemble_size = 20;
    cfg.seed = 7001;
  } else if (name == "datacenter") {
    DatacenterSpec s;
    s.pods = 4;
    s.link_capacity = 10.0;
    cfg.scenario.params = s;
    cfg.controller = {ControllerVariant::CoupledMultipath, 150.0, 1e-2};
    cfg.traffic = {TrafficModel::Kind::OnOff, 0.5, 0.2, 5.0, 0.1};
    cfg.stability = {0.01, 0.08, 120.0, 1.0};
    cfg.solver = {1e-7, 1e-7};
    cfg.dynamics = {3.0, 2.5e-5, 1e-6};
    cfg.ensemble_size = 20;
    cfg.seed = 9001;
  } else if (name == "wireless") {
    WirelessSpec s;
    s.n_devices = 12;
    s.interfaces_per_device = 2;
    s.interface_capacity = 6.0;
    s.energy_cost = 0.1;
    s.energy_weight = 0.05;
    cfg.scenario.params = s;
    cfg.controller = {ControllerVariant::CoupledMultipath, 20.0, 1e-3};
    cfg.traffic.kind = TrafficModel::Kind::Constant;
    cfg.stability = {1e-3, 0.5, 30.0, 0.0};
    cfg.solver = {1e-7, 1e-7};
    cfg.dynamics = {60.0, 5e-4, 1e-4};
    cfg.ensemble_size = 20;
    cfg.seed = 8001;
  } else {
    throw UnknownPreset("unknown preset '" + name +
                        "' (expected internet|datacenter|wireless)");
  }
  return cfg;
}

}  // namespace mptcplab
