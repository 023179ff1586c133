#pragma once

#include <span>
#include <vector>

#include "mptcplab/equilibrium.hpp"
#include "mptcplab/net_model.hpp"
#include "mptcplab/traffic.hpp"

namespace mptcplab {

enum class ControllerVariant { SinglePath, UncoupledMultipath, CoupledMultipath };

/// Fluid-model rate controller. Each path evolves as
///
///   dr_p/dt = gain * (U'(arg) - gamma e_p - Lambda_p)
///
/// where Lambda_p sums the link prices along the path and arg is r_p for the
/// uncoupled controller, the source total r_x for the coupled one, and the
/// primary rate for the single-path baseline (whose other paths stay frozen).
/// The link price is a smooth congestion penalty,
///
///   price(l) = barrier_beta / max(capacity - load, 1e-6 * capacity)
///            + max(0, (load - capacity) / capacity),
///
/// which keeps rest points strictly inside the capacity region; smaller
/// barrier_beta parks them closer to the constrained optimum at the cost of
/// a stiffer ODE.
struct ControllerKind {
  ControllerVariant variant = ControllerVariant::CoupledMultipath;
  double gain = 1.0;          // kappa, > 0
  double barrier_beta = 1e-4; // link-price smoothing, > 0
};

const char* controller_name(ControllerVariant v);

struct TrajectorySample {
  double time = 0.0;
  RateAllocation alloc;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<TrajectorySample> samples;  // times 0, dt, 2dt, ...
  RateAllocation final;
  bool converged = false;
  bool oscillation_detected = false;  // mutually exclusive with converged
  long clamp_count = 0;               // positivity-floor activations
};

/// dr_p/dt for every path at the given allocation. Participating paths must
/// carry strictly positive rates (DomainError otherwise); the single-path
/// variant reports zero derivative on non-primary paths.
std::vector<double> controller_vector_field(const ControllerKind& kind,
                                            const Network& net,
                                            const RateAllocation& alloc);

/// Same, with a per-source weight multiplier (demand modulation).
std::vector<double> controller_vector_field(
    const ControllerKind& kind, const Network& net,
    const RateAllocation& alloc, std::span<const double> source_weight_scale);

struct IntegrationConfig {
  double horizon = 10.0;
  double dt = 1e-3;
  double tol = 1e-6;  // derivative-norm threshold for convergence

  TrafficModel traffic{};             // Constant: bitwise equal to no model
  std::vector<double> source_phases;  // per-source burst phase offsets (s);
                                      // empty means all zero
  double oscillation_cov_threshold = 0.05;
  double rate_floor = 0.0;  // positivity clamp; <= 0 picks a tiny default
};

/// Fixed-step RK4 from the uniform start. converged flips true (and
/// integration stops) once the projected derivative norm stays below tol for
/// 100 consecutive steps; otherwise, if the trailing half of the run shows a
/// per-path coefficient of variation above the threshold, the trajectory is
/// flagged oscillating. Rates are clamped at rate_floor (clamp_count tracks
/// activations) and NumericalBlowup is thrown if any rate exceeds 1000x the
/// total network capacity.
Trajectory integrate(const ControllerKind& kind, const Network& net,
                     const IntegrationConfig& cfg);

/// Convenience overload with default traffic and thresholds.
Trajectory integrate(const ControllerKind& kind, const Network& net,
                     double horizon, double dt, double tol);

}  // namespace mptcplab
