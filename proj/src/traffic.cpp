#include "mptcplab/traffic.hpp"

#include <cmath>

namespace mptcplab {

void validate(const TrafficModel& model) {
  if (model.kind == TrafficModel::Kind::Constant) return;
  if (!(model.period > 0.0))
    throw InvalidSpec("traffic: period must be positive");
  if (!(model.duty > 0.0) || !(model.duty < 1.0))
    throw InvalidSpec("traffic: duty must lie in (0, 1)");
  if (!(model.amplitude >= 1.0))
    throw InvalidSpec("traffic: amplitude must be >= 1");
  if (!(model.quiescent >= 0.0) || !(model.quiescent < 1.0))
    throw InvalidSpec("traffic: quiescent must lie in [0, 1)");
}

double modulation(const TrafficModel& model, double t) {
  if (model.kind == TrafficModel::Kind::Constant) return 1.0;
  double phase = std::fmod(t, model.period);
  if (phase < 0.0) phase += model.period;
  return phase / model.period < model.duty ? model.amplitude : model.quiescent;
}

std::vector<double> burst_schedule(const TrafficModel& model, double horizon,
                                   double dt) {
  if (!(dt > 0.0) || !(horizon >= dt))
    throw InvalidStep("burst_schedule: need horizon >= dt > 0");
  std::size_t n = static_cast<std::size_t>(std::floor(horizon / dt));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = modulation(model, static_cast<double>(i) * dt);
  return out;
}

}  // namespace mptcplab
