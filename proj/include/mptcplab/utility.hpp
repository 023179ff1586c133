#pragma once

#include "mptcplab/errors.hpp"

namespace mptcplab {

/// Alpha-fair utility family with an optional linear energy penalty.
///
/// alpha = 1 is proportional fairness (w log x), alpha = 2 the classic
/// TCP-like objective, alpha -> infinity approaches max-min fairness. The
/// energy term subtracts energy_weight * e from the throughput utility and
/// is disabled when energy_weight is zero.
struct UtilitySpec {
  double alpha = 1.0;
  double weight = 1.0;
  double energy_weight = 0.0;  // gamma
};

/// Throws InvalidSpec unless alpha > 0, weight > 0 and energy_weight >= 0.
void validate(const UtilitySpec& spec);

/// U(x) for x > 0. Throws DomainError otherwise.
double utility_value(const UtilitySpec& spec, double x);

/// U(x) - gamma * e for x > 0, e >= 0. Reduces to utility_value at gamma = 0.
double utility_energy_value(const UtilitySpec& spec, double x, double e);

/// dU/dx = w * x^(-alpha) for x > 0.
double utility_gradient(const UtilitySpec& spec, double x);

}  // namespace mptcplab
