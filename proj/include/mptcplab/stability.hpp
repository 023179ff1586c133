#pragma once

#include <span>
#include <vector>

#include "mptcplab/dynamics.hpp"
#include "mptcplab/equilibrium.hpp"
#include "mptcplab/net_model.hpp"

namespace mptcplab {

struct StabilityConfig {
  double eps = 1e-3;           // per-path rate floor
  double burden_bound = 1.0;   // B_max, finite cap on the burden displacement
  double displacement_tol = 1e18;  // max source-total displacement for Stable
  double window = 0.0;         // trailing duration for burst suprema;
                               // <= 0 means the whole trajectory
};

/// Per-path traffic burden b_p = r_p * hop count: the rate-resource
/// footprint. Summed over paths it equals the summed link loads.
struct BurdenVector {
  std::vector<double> per_path;
};

enum class Classification { Stable, Unstable };

struct StabilityReport {
  double displacement = 0.0;        // ||x^n - x*|| over per-source totals
  double per_path_displacement = 0.0;  // secondary diagnostic
  double burden_displacement = 0.0;    // ||b* - b^n||
  bool paths_ok = false;     // every source keeps >= 2 paths
  bool floor_ok = false;     // active paths of x^n at or above eps
  bool capacity_ok = false;  // per-link loads within capacity
  bool burden_ok = false;    // burden displacement within burden_bound
  Classification classification = Classification::Unstable;
  double sup_displacement_over_window = 0.0;  // burst runs; equals
                                              // displacement on static input
};

const char* classification_name(Classification c);

/// sqrt(sum (a_i - b_i)^2). Throws DimensionMismatch on unequal lengths.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

BurdenVector compute_burden(const Network& net, const RateAllocation& alloc);

/// Static assessment of a candidate equilibrium x_new against the baseline
/// x_star. Stable iff all four verdicts hold and the displacement is within
/// displacement_tol. Both allocations must cover the network
/// (AllocationMismatch otherwise); x_new may be infeasible - that is what the
/// verdicts detect.
StabilityReport assess(const Network& net, const RateAllocation& x_star,
                       const RateAllocation& x_new,
                       const StabilityConfig& cfg);

/// Burst-episode assessment: displacement and burden displacement are
/// suprema over the trailing window of the trajectory versus the baseline;
/// floor and capacity verdicts are taken on the final sample. An oscillating
/// trajectory is Unstable regardless of its final sample.
StabilityReport assess_time_varying(const Network& net,
                                    const RateAllocation& baseline,
                                    const Trajectory& traj,
                                    const StabilityConfig& cfg);

}  // namespace mptcplab
