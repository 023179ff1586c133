#pragma once

#include <vector>

#include "mptcplab/errors.hpp"

namespace mptcplab {

/// Demand-intensity modulation applied multiplicatively to source utility
/// weights. Constant leaves weights untouched; OnOff alternates between an
/// amplitude multiplier (for duty * period seconds) and a quiescent
/// multiplier for the rest of each period.
struct TrafficModel {
  enum class Kind { Constant, OnOff };

  Kind kind = Kind::Constant;
  double period = 1.0;     // s, > 0
  double duty = 0.5;       // fraction in (0, 1)
  double amplitude = 1.0;  // >= 1, applied during ON
  double quiescent = 0.0;  // in [0, 1), applied during OFF
};

void validate(const TrafficModel& model);

/// Weight multiplier at time t. Piecewise constant and exactly periodic for
/// OnOff; identically 1 for Constant. Total on valid models (negative t wraps
/// into the cycle).
double modulation(const TrafficModel& model, double t);

/// Tabulated modulation for a fixed-step integrator: entry i is the
/// multiplier at t = i * dt, floor(horizon / dt) entries. Throws InvalidStep
/// unless horizon >= dt > 0.
std::vector<double> burst_schedule(const TrafficModel& model, double horizon,
                                   double dt);

}  // namespace mptcplab
