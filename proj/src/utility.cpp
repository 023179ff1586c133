#include "mptcplab/utility.hpp"

#include <cmath>

namespace mptcplab {

void validate(const UtilitySpec& spec) {
  if (!(spec.alpha > 0.0)) throw InvalidSpec("utility: alpha must be positive");
  if (!(spec.weight > 0.0)) throw InvalidSpec("utility: weight must be positive");
  if (!(spec.energy_weight >= 0.0))
    throw InvalidSpec("utility: energy_weight must be nonnegative");
}

double utility_value(const UtilitySpec& spec, double x) {
  if (!(x > 0.0)) throw DomainError("utility_value: x must be positive");
  if (spec.alpha == 1.0) return spec.weight * std::log(x);
  return spec.weight * std::pow(x, 1.0 - spec.alpha) / (1.0 - spec.alpha);
}

double utility_energy_value(const UtilitySpec& spec, double x, double e) {
  if (!(e >= 0.0))
    throw DomainError("utility_energy_value: e must be nonnegative");
  return utility_value(spec, x) - spec.energy_weight * e;
}

double utility_gradient(const UtilitySpec& spec, double x) {
  if (!(x > 0.0)) throw DomainError("utility_gradient: x must be positive");
  return spec.weight * std::pow(x, -spec.alpha);
}

}  // namespace mptcplab
