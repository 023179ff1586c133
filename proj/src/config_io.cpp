#include "mptcplab/config_io.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

namespace mptcplab {

namespace {

using Json = nlohmann::ordered_json;

// Fail-closed object access: every present key must be known and every
// listed key must be present.
void require_keys(const Json& obj, const std::string& where,
                  std::initializer_list<const char*> keys) {
  if (!obj.is_object())
    throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("config: unknown key '" + item.key() + "' in '" +
                        where + "'");
  }
  for (const char* k : keys)
    if (!obj.contains(k))
      throw ConfigError("config: missing key '" + std::string(k) + "' in '" +
                        where + "'");
  }

double get_number(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("config: '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

int get_int(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError("config: '" + where + "." + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const Json& obj, const std::string& where,
                       const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError("config: '" + where + "." + key + "' must be a string");
  return v.get<std::string>();
}

ScenarioSpec parse_scenario(const Json& j) {
  if (!j.is_object() || !j.contains("variant"))
    throw ConfigError("config: scenario needs a 'variant'");
  std::string variant = get_string(j, "scenario", "variant");
  ScenarioSpec spec;
  if (variant == "internet") {
    require_keys(j, "scenario",
                 {"variant", "n_sources", "n_links", "paths_per_source",
                  "capacity_min", "capacity_max"});
    InternetSpec s;
    s.n_sources = get_int(j, "scenario", "n_sources");
    s.n_links = get_int(j, "scenario", "n_links");
    s.paths_per_source = get_int(j, "scenario", "paths_per_source");
    s.capacity_min = get_number(j, "scenario", "capacity_min");
    s.capacity_max = get_number(j, "scenario", "capacity_max");
    spec.params = s;
  } else if (variant == "datacenter") {
    require_keys(j, "scenario", {"variant", "pods", "link_capacity"});
    DatacenterSpec s;
    s.pods = get_int(j, "scenario", "pods");
    s.link_capacity = get_number(j, "scenario", "link_capacity");
    spec.params = s;
  } else if (variant == "wireless") {
    require_keys(j, "scenario",
                 {"variant", "n_devices", "interfaces_per_device",
                  "interface_capacity", "energy_cost", "energy_weight"});
    WirelessSpec s;
    s.n_devices = get_int(j, "scenario", "n_devices");
    s.interfaces_per_device = get_int(j, "scenario", "interfaces_per_device");
    s.interface_capacity = get_number(j, "scenario", "interface_capacity");
    s.energy_cost = get_number(j, "scenario", "energy_cost");
    s.energy_weight = get_number(j, "scenario", "energy_weight");
    spec.params = s;
  } else {
    throw ConfigError("config: unknown scenario variant '" + variant + "'");
  }
  return spec;
}

ControllerKind parse_controller(const Json& j) {
  require_keys(j, "controller", {"variant", "gain", "barrier_beta"});
  ControllerKind kind;
  std::string variant = get_string(j, "controller", "variant");
  if (variant == "single_path")
    kind.variant = ControllerVariant::SinglePath;
  else if (variant == "uncoupled_multipath")
    kind.variant = ControllerVariant::UncoupledMultipath;
  else if (variant == "coupled_multipath")
    kind.variant = ControllerVariant::CoupledMultipath;
  else
    throw ConfigError("config: unknown controller variant '" + variant + "'");
  kind.gain = get_number(j, "controller", "gain");
  kind.barrier_beta = get_number(j, "controller", "barrier_beta");
  return kind;
}

TrafficModel parse_traffic(const Json& j) {
  if (!j.is_object() || !j.contains("variant"))
    throw ConfigError("config: traffic needs a 'variant'");
  std::string variant = get_string(j, "traffic", "variant");
  TrafficModel model;
  if (variant == "constant") {
    require_keys(j, "traffic", {"variant"});
    model.kind = TrafficModel::Kind::Constant;
  } else if (variant == "on_off") {
    require_keys(j, "traffic",
                 {"variant", "period", "duty", "amplitude", "quiescent"});
    model.kind = TrafficModel::Kind::OnOff;
    model.period = get_number(j, "traffic", "period");
    model.duty = get_number(j, "traffic", "duty");
    model.amplitude = get_number(j, "traffic", "amplitude");
    model.quiescent = get_number(j, "traffic", "quiescent");
  } else {
    throw ConfigError("config: unknown traffic variant '" + variant + "'");
  }
  return model;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  require_keys(j, "<root>",
               {"scenario", "controller", "traffic", "stability", "solver",
                "dynamics", "ensemble_size", "seed"});

  ExperimentConfig cfg;
  cfg.scenario = parse_scenario(j.at("scenario"));
  cfg.controller = parse_controller(j.at("controller"));
  cfg.traffic = parse_traffic(j.at("traffic"));

  const Json& st = j.at("stability");
  require_keys(st, "stability",
               {"eps", "burden_bound_fraction", "displacement_tol", "window"});
  cfg.stability.eps = get_number(st, "stability", "eps");
  cfg.stability.burden_bound_fraction =
      get_number(st, "stability", "burden_bound_fraction");
  cfg.stability.displacement_tol = get_number(st, "stability", "displacement_tol");
  cfg.stability.window = get_number(st, "stability", "window");

  const Json& so = j.at("solver");
  require_keys(so, "solver", {"baseline_tol", "multipath_tol"});
  cfg.solver.baseline_tol = get_number(so, "solver", "baseline_tol");
  cfg.solver.multipath_tol = get_number(so, "solver", "multipath_tol");

  const Json& dy = j.at("dynamics");
  require_keys(dy, "dynamics", {"horizon", "dt", "convergence_tol"});
  cfg.dynamics.horizon = get_number(dy, "dynamics", "horizon");
  cfg.dynamics.dt = get_number(dy, "dynamics", "dt");
  cfg.dynamics.convergence_tol = get_number(dy, "dynamics", "convergence_tol");

  const Json& es = j.at("ensemble_size");
  if (!es.is_number_integer())
    throw ConfigError("config: 'ensemble_size' must be an integer");
  cfg.ensemble_size = es.get<int>();
  const Json& sd = j.at("seed");
  if (!sd.is_number_unsigned() && !sd.is_number_integer())
    throw ConfigError("config: 'seed' must be a nonnegative integer");
  if (sd.is_number_integer() && sd.get<long long>() < 0)
    throw ConfigError("config: 'seed' must be nonnegative");
  cfg.seed = sd.get<std::uint64_t>();

  try {
    validate(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  Json j;
  Json sc;
  switch (variant_of(cfg.scenario)) {
    case ScenarioVariant::Internet: {
      const auto& s = std::get<InternetSpec>(cfg.scenario.params);
      sc["variant"] = "internet";
      sc["n_sources"] = s.n_sources;
      sc["n_links"] = s.n_links;
      sc["paths_per_source"] = s.paths_per_source;
      sc["capacity_min"] = s.capacity_min;
      sc["capacity_max"] = s.capacity_max;
      break;
    }
    case ScenarioVariant::Datacenter: {
      const auto& s = std::get<DatacenterSpec>(cfg.scenario.params);
      sc["variant"] = "datacenter";
      sc["pods"] = s.pods;
      sc["link_capacity"] = s.link_capacity;
      break;
    }
    case ScenarioVariant::Wireless: {
      const auto& s = std::get<WirelessSpec>(cfg.scenario.params);
      sc["variant"] = "wireless";
      sc["n_devices"] = s.n_devices;
      sc["interfaces_per_device"] = s.interfaces_per_device;
      sc["interface_capacity"] = s.interface_capacity;
      sc["energy_cost"] = s.energy_cost;
      sc["energy_weight"] = s.energy_weight;
      break;
    }
  }
  j["scenario"] = sc;
  j["controller"] = {{"variant", controller_name(cfg.controller.variant)},
                     {"gain", cfg.controller.gain},
                     {"barrier_beta", cfg.controller.barrier_beta}};
  if (cfg.traffic.kind == TrafficModel::Kind::Constant) {
    j["traffic"] = {{"variant", "constant"}};
  } else {
    j["traffic"] = {{"variant", "on_off"},
                    {"period", cfg.traffic.period},
                    {"duty", cfg.traffic.duty},
                    {"amplitude", cfg.traffic.amplitude},
                    {"quiescent", cfg.traffic.quiescent}};
  }
  j["stability"] = {{"eps", cfg.stability.eps},
                    {"burden_bound_fraction", cfg.stability.burden_bound_fraction},
                    {"displacement_tol", cfg.stability.displacement_tol},
                    {"window", cfg.stability.window}};
  j["solver"] = {{"baseline_tol", cfg.solver.baseline_tol},
                 {"multipath_tol", cfg.solver.multipath_tol}};
  j["dynamics"] = {{"horizon", cfg.dynamics.horizon},
                   {"dt", cfg.dynamics.dt},
                   {"convergence_tol", cfg.dynamics.convergence_tol}};
  j["ensemble_size"] = cfg.ensemble_size;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << config_to_json(cfg);
  if (!out) throw IoError("failed writing config to '" + path + "'");
}

void apply_seed_overrides(ExperimentConfig& cfg,
                          std::optional<std::uint64_t> cli_seed) {
  if (cli_seed) {
    cfg.seed = *cli_seed;
    return;
  }
  const char* env = std::getenv("MPTCP_LAB_SEED");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw ConfigError("MPTCP_LAB_SEED is not a nonnegative integer: '" +
                      std::string(env) + "'");
  cfg.seed = static_cast<std::uint64_t>(v);
}

}  // namespace mptcplab
