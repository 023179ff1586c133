#include "mptcplab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mptcplab {

const char* controller_name(ControllerVariant v) {
  switch (v) {
    case ControllerVariant::SinglePath: return "single_path";
    case ControllerVariant::UncoupledMultipath: return "uncoupled_multipath";
    case ControllerVariant::CoupledMultipath: return "coupled_multipath";
  }
  return "?";
}

namespace {

constexpr double kSlackGuardFrac = 1e-6;  // division guard; below this slack
                                          // the barrier is effectively a wall
constexpr int kConvergenceRun = 100;

void validate_kind(const ControllerKind& kind) {
  if (!(kind.gain > 0.0)) throw InvalidSpec("controller: gain must be positive");
  if (!(kind.barrier_beta > 0.0))
    throw InvalidSpec("controller: barrier_beta must be positive");
}

struct FieldWorkspace {
  std::vector<double> loads;
  std::vector<double> prices;
  std::vector<double> totals;
};

// dr_p/dt for every path. `scale` carries per-source weight multipliers
// (empty = unmodulated). `eval_floor` > 0 clamps utility arguments for use
// inside integrator stages; strict mode instead rejects nonpositive rates.
void eval_field(const ControllerKind& kind, const Network& net,
                const std::vector<double>& rates,
                std::span<const double> scale, double eval_floor, bool strict,
                FieldWorkspace& ws, std::vector<double>& out) {
  const auto& links = net.links();
  ws.loads.assign(links.size(), 0.0);
  for (std::size_t p = 0; p < rates.size(); ++p)
    for (std::size_t l : net.path_links(p)) ws.loads[l] += rates[p];

  ws.prices.resize(links.size());
  for (std::size_t l = 0; l < links.size(); ++l) {
    double cap = links[l].capacity;
    double slack = cap - ws.loads[l];
    double price = kind.barrier_beta / std::max(slack, kSlackGuardFrac * cap);
    if (ws.loads[l] > cap) price += (ws.loads[l] - cap) / cap;
    ws.prices[l] = price;
  }

  ws.totals.assign(net.sources().size(), 0.0);
  for (std::size_t s = 0; s < net.sources().size(); ++s)
    for (std::size_t p : net.source_paths(s)) ws.totals[s] += rates[p];

  out.assign(rates.size(), 0.0);
  for (std::size_t s = 0; s < net.sources().size(); ++s) {
    const UtilitySpec& u = net.sources()[s].utility;
    double m = scale.empty() ? 1.0 : scale[s];
    for (std::size_t p : net.source_paths(s)) {
      if (kind.variant == ControllerVariant::SinglePath &&
          p != net.primary_path(s)) {
        out[p] = 0.0;
        continue;
      }
      double arg = kind.variant == ControllerVariant::CoupledMultipath
                       ? ws.totals[s]
                       : rates[p];
      if (strict && !(rates[p] > 0.0))
        throw DomainError("controller_vector_field: nonpositive rate on path '" +
                          net.paths()[p].id + "'");
      if (!strict) arg = std::max(arg, eval_floor);
      double drive = m * u.weight * std::pow(arg, -u.alpha) -
                     u.energy_weight * net.paths()[p].energy_cost;
      double lambda = 0.0;
      for (std::size_t l : net.path_links(p)) lambda += ws.prices[l];
      out[p] = kind.gain * (drive - lambda);
    }
  }
}

}  // namespace

std::vector<double> controller_vector_field(const ControllerKind& kind,
                                            const Network& net,
                                            const RateAllocation& alloc) {
  return controller_vector_field(kind, net, alloc, std::span<const double>{});
}

std::vector<double> controller_vector_field(
    const ControllerKind& kind, const Network& net, const RateAllocation& alloc,
    std::span<const double> source_weight_scale) {
  validate_kind(kind);
  if (alloc.rates.size() != net.paths().size())
    throw AllocationMismatch("allocation does not match network path count");
  if (!source_weight_scale.empty() &&
      source_weight_scale.size() != net.sources().size())
    throw InvalidSpec("weight-scale vector does not match source count");
  FieldWorkspace ws;
  std::vector<double> out;
  eval_field(kind, net, alloc.rates, source_weight_scale, 0.0, true, ws, out);
  return out;
}

Trajectory integrate(const ControllerKind& kind, const Network& net,
                     const IntegrationConfig& cfg) {
  validate_kind(kind);
  validate(cfg.traffic);
  if (!(cfg.dt > 0.0) || cfg.dt > cfg.horizon)
    throw InvalidStep("integrate: need 0 < dt <= horizon");
  if (!cfg.source_phases.empty() &&
      cfg.source_phases.size() != net.sources().size())
    throw InvalidSpec("integrate: phase vector does not match source count");

  const std::size_t n = net.paths().size();
  const double rate_floor =
      cfg.rate_floor > 0.0 ? cfg.rate_floor : 1e-9 * net.min_capacity();
  const double blowup_limit = 1e3 * net.total_capacity();
  const bool single = kind.variant == ControllerVariant::SinglePath;

  std::vector<bool> participating(n, true);
  if (single) {
    participating.assign(n, false);
    for (std::size_t s = 0; s < net.sources().size(); ++s)
      participating[net.primary_path(s)] = true;
  }

  // Uniform start: the same small positive mass on every participating path,
  // sized to keep even the busiest link initially uncongested.
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < net.links().size(); ++l) {
    double c = net.links()[l].capacity /
               (1.0 + static_cast<double>(net.paths_on_link(l).size()));
    v = std::min(v, c);
  }
  v = std::max(0.5 * v, rate_floor);

  std::vector<double> r(n, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    if (participating[p]) r[p] = v;

  const bool modulated = cfg.traffic.kind != TrafficModel::Kind::Constant;
  std::vector<double> scale_buf(modulated ? net.sources().size() : 0);
  auto weight_scale = [&](double t) -> std::span<const double> {
    if (!modulated) return {};
    for (std::size_t s = 0; s < scale_buf.size(); ++s) {
      double phase = cfg.source_phases.empty() ? 0.0 : cfg.source_phases[s];
      scale_buf[s] = modulation(cfg.traffic, t + phase);
    }
    return scale_buf;
  };

  const auto n_steps = static_cast<std::size_t>(
      std::floor(cfg.horizon / cfg.dt + 1e-9));

  Trajectory traj;
  traj.dt = cfg.dt;
  traj.samples.reserve(n_steps + 1);
  traj.samples.push_back({0.0, RateAllocation{r}});

  FieldWorkspace ws;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  int consec = 0;

  for (std::size_t step = 0; step < n_steps; ++step) {
    double t = static_cast<double>(step) * cfg.dt;
    eval_field(kind, net, r, weight_scale(t), rate_floor, false, ws, k1);

    // Convergence watches the projected field: a path parked at the floor
    // with negative drive is at rest.
    double pn = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (!participating[p]) continue;
      if (r[p] <= rate_floor * (1.0 + 1e-12) && k1[p] < 0.0) continue;
      pn += k1[p] * k1[p];
    }
    pn = std::sqrt(pn);
    if (pn < cfg.tol) {
      if (++consec >= kConvergenceRun) {
        traj.converged = true;
        break;
      }
    } else {
      consec = 0;
    }

    for (std::size_t p = 0; p < n; ++p) tmp[p] = r[p] + 0.5 * cfg.dt * k1[p];
    eval_field(kind, net, tmp, weight_scale(t + 0.5 * cfg.dt), rate_floor,
               false, ws, k2);
    for (std::size_t p = 0; p < n; ++p) tmp[p] = r[p] + 0.5 * cfg.dt * k2[p];
    eval_field(kind, net, tmp, weight_scale(t + 0.5 * cfg.dt), rate_floor,
               false, ws, k3);
    for (std::size_t p = 0; p < n; ++p) tmp[p] = r[p] + cfg.dt * k3[p];
    eval_field(kind, net, tmp, weight_scale(t + cfg.dt), rate_floor, false, ws,
               k4);

    double max_rate = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      r[p] += cfg.dt / 6.0 * (k1[p] + 2.0 * (k2[p] + k3[p]) + k4[p]);
      if (participating[p] && r[p] < rate_floor) {
        r[p] = rate_floor;
        ++traj.clamp_count;
      }
      max_rate = std::max(max_rate, r[p]);
    }
    if (max_rate > blowup_limit)
      throw NumericalBlowup("integrate: rate exceeded 1000x total capacity at t=" +
                            std::to_string(t + cfg.dt));

    traj.samples.push_back(
        {static_cast<double>(step + 1) * cfg.dt, RateAllocation{r}});
  }

  traj.final = traj.samples.back().alloc;

  if (!traj.converged) {
    // Limit-cycle check over the trailing half of the horizon.
    double t_min = 0.5 * cfg.horizon;
    std::size_t begin = traj.samples.size();
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      if (traj.samples[i].time >= t_min - 1e-12) {
        begin = i;
        break;
      }
    }
    std::size_t count = traj.samples.size() - begin;
    if (count >= 2) {
      for (std::size_t p = 0; p < n && !traj.oscillation_detected; ++p) {
        double mean = 0.0;
        for (std::size_t i = begin; i < traj.samples.size(); ++i)
          mean += traj.samples[i].alloc.rates[p];
        mean /= static_cast<double>(count);
        if (mean <= 1e-9 * net.max_capacity()) continue;
        double var = 0.0;
        for (std::size_t i = begin; i < traj.samples.size(); ++i) {
          double d = traj.samples[i].alloc.rates[p] - mean;
          var += d * d;
        }
        var /= static_cast<double>(count);
        if (std::sqrt(var) / mean > cfg.oscillation_cov_threshold)
          traj.oscillation_detected = true;
      }
    }
  }
  return traj;
}

Trajectory integrate(const ControllerKind& kind, const Network& net,
                     double horizon, double dt, double tol) {
  IntegrationConfig cfg;
  cfg.horizon = horizon;
  cfg.dt = dt;
  cfg.tol = tol;
  return integrate(kind, net, cfg);
}

}  // namespace mptcplab
