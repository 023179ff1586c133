#include "mptcplab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mptcplab {

const char* classification_name(Classification c) {
  return c == Classification::Stable ? "stable" : "unstable";
}

double euclidean_distance(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionMismatch("euclidean_distance: vectors differ in dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

BurdenVector compute_burden(const Network& net, const RateAllocation& alloc) {
  if (alloc.rates.size() != net.paths().size())
    throw AllocationMismatch("allocation does not match network path count");
  BurdenVector b;
  b.per_path.resize(net.paths().size());
  for (std::size_t p = 0; p < net.paths().size(); ++p)
    b.per_path[p] =
        alloc.rates[p] * static_cast<double>(net.path_links(p).size());
  return b;
}

namespace {

void validate_config(const StabilityConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw InvalidSpec("stability: eps must be positive");
  if (!(cfg.burden_bound > 0.0))
    throw InvalidSpec("stability: burden_bound must be positive");
  if (!(cfg.displacement_tol >= 0.0))
    throw InvalidSpec("stability: displacement_tol must be nonnegative");
}

bool all_sources_multipath(const Network& net) {
  for (std::size_t s = 0; s < net.sources().size(); ++s)
    if (net.source_paths(s).size() < 2) return false;
  return true;
}

bool floor_satisfied(const RateAllocation& alloc, double eps) {
  for (double r : alloc.rates) {
    if (r > 0.0 && r < eps * (1.0 - 1e-9)) return false;
  }
  return true;
}

bool capacity_satisfied(const Network& net, const RateAllocation& alloc) {
  std::vector<double> loads = link_loads(net, alloc);
  for (std::size_t l = 0; l < loads.size(); ++l) {
    if (loads[l] > net.links()[l].capacity * (1.0 + 1e-9) + 1e-12) return false;
  }
  return true;
}

}  // namespace

StabilityReport assess(const Network& net, const RateAllocation& x_star,
                       const RateAllocation& x_new,
                       const StabilityConfig& cfg) {
  validate_config(cfg);
  if (x_star.rates.size() != net.paths().size() ||
      x_new.rates.size() != net.paths().size())
    throw AllocationMismatch("assess: allocations do not match the network");

  StabilityReport rep;
  std::vector<double> t_star = source_totals(net, x_star);
  std::vector<double> t_new = source_totals(net, x_new);
  rep.displacement = euclidean_distance(t_star, t_new);
  rep.per_path_displacement = euclidean_distance(x_star.rates, x_new.rates);
  rep.burden_displacement = euclidean_distance(
      compute_burden(net, x_star).per_path, compute_burden(net, x_new).per_path);

  rep.paths_ok = all_sources_multipath(net);
  rep.floor_ok = floor_satisfied(x_new, cfg.eps);
  rep.capacity_ok = capacity_satisfied(net, x_new);
  rep.burden_ok = rep.burden_displacement <= cfg.burden_bound;
  rep.sup_displacement_over_window = rep.displacement;

  bool stable = rep.paths_ok && rep.floor_ok && rep.capacity_ok &&
                rep.burden_ok && rep.displacement <= cfg.displacement_tol;
  rep.classification =
      stable ? Classification::Stable : Classification::Unstable;
  return rep;
}

StabilityReport assess_time_varying(const Network& net,
                                    const RateAllocation& baseline,
                                    const Trajectory& traj,
                                    const StabilityConfig& cfg) {
  validate_config(cfg);
  if (traj.samples.empty())
    throw EmptyTrajectory("assess_time_varying: trajectory has no samples");
  if (baseline.rates.size() != net.paths().size())
    throw AllocationMismatch("assess_time_varying: baseline does not match");

  double t_end = traj.samples.back().time;
  double t_min = cfg.window > 0.0 ? t_end - cfg.window
                                  : -std::numeric_limits<double>::infinity();

  std::vector<double> base_totals = source_totals(net, baseline);
  BurdenVector base_burden = compute_burden(net, baseline);

  double sup_disp = 0.0;
  double sup_burden = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    if (s.time < t_min - 1e-12) continue;
    sup_disp = std::max(
        sup_disp, euclidean_distance(base_totals, source_totals(net, s.alloc)));
    sup_burden = std::max(
        sup_burden, euclidean_distance(base_burden.per_path,
                                       compute_burden(net, s.alloc).per_path));
  }

  StabilityReport rep;
  rep.displacement = sup_disp;
  rep.sup_displacement_over_window = sup_disp;
  rep.burden_displacement = sup_burden;
  rep.per_path_displacement =
      euclidean_distance(baseline.rates, traj.final.rates);
  rep.paths_ok = all_sources_multipath(net);
  rep.floor_ok = floor_satisfied(traj.final, cfg.eps);
  rep.capacity_ok = capacity_satisfied(net, traj.final);
  rep.burden_ok = sup_burden <= cfg.burden_bound;

  bool stable = !traj.oscillation_detected && rep.paths_ok && rep.floor_ok &&
                rep.capacity_ok && rep.burden_ok &&
                sup_disp <= cfg.displacement_tol;
  rep.classification =
      stable ? Classification::Stable : Classification::Unstable;
  return rep;
}

}  // namespace mptcplab
