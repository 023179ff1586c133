#pragma once

#include <vector>

#include "mptcplab/net_model.hpp"

namespace mptcplab {

/// Per-path rates r_p, aligned with Network::paths() order. Per-source
/// totals r_x are derived through source_totals().
struct RateAllocation {
  std::vector<double> rates;
};

/// r_x = sum of the source's path rates. Throws AllocationMismatch when the
/// allocation does not cover every path of the network.
std::vector<double> source_totals(const Network& net,
                                  const RateAllocation& alloc);

/// Per-link loads: sum of rates over the paths crossing each link.
std::vector<double> link_loads(const Network& net,
                               const RateAllocation& alloc);

/// Welfare of an allocation: sum over sources of U_x(r_x) minus the energy
/// penalty gamma_x * sum_p e_p r_p. Total on nonnegative rates; a zero-rate
/// source contributes -infinity when its alpha >= 1 and 0 otherwise.
double allocation_objective(const Network& net, const RateAllocation& alloc);

struct SolverReport {
  RateAllocation allocation;
  int iterations = 0;
  double kkt_residual = 0.0;  // norm of the unit-step projected-gradient map
  bool converged = false;
};

/// Single-path baseline equilibrium x*: maximizes sum U_x(r_x) with every
/// source confined to its primary path, subject to link capacities. Iterates
/// stay feasible (Euclidean projection onto the capacity polytope). Monotone
/// ascent with Armijo backtracking; throws NoConvergence if the KKT residual
/// is still above tol at the iteration cap.
///
/// objective_trace, when given, receives the objective value of every
/// accepted iterate (nondecreasing by construction).
SolverReport solve_baseline(const Network& net, double tol,
                            std::vector<double>* objective_trace = nullptr);

/// Multipath equilibrium x^n: maximizes sum U_x(r_x) (with the energy
/// penalty when gamma > 0) over all path rates subject to capacities and the
/// per-path floor r_p >= eps. Requires every source to own at least two
/// paths. Throws InfeasibleFloor when the floors alone overload a link.
SolverReport solve_multipath(const Network& net, double eps, double tol,
                             std::vector<double>* objective_trace = nullptr);

/// Same feasible set as solve_multipath, but each path maximizes its own
/// utility term (the uncoupled controller's welfare).
SolverReport solve_multipath_uncoupled(
    const Network& net, double eps, double tol,
    std::vector<double>* objective_trace = nullptr);

/// Exhaustive grid search over the feasible box, test oracle only. Guarded
/// to networks with at most 4 paths (TooLarge otherwise). Axes start at
/// `floor` and advance by grid_step up to each path's bottleneck capacity;
/// the all-zeros allocation is the fallback when no grid point is feasible.
///
/// refine_levels > 0 re-grids around the incumbent with a 5x finer step per
/// level (still derivative-free and solver-independent), which sharpens the
/// objective to far below one coarse step.
RateAllocation brute_force_equilibrium(const Network& net, double grid_step,
                                       double floor = 0.0,
                                       int refine_levels = 0);

}  // namespace mptcplab
