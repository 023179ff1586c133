#include "mptcplab/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace mptcplab {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// RFC 4180: quote fields containing separators, quotes or newlines.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Json report_to_json(const StabilityReport& rep) {
  Json j;
  j["displacement"] = rep.displacement;
  j["per_path_displacement"] = rep.per_path_displacement;
  j["burden_displacement"] = rep.burden_displacement;
  j["paths_ok"] = rep.paths_ok;
  j["floor_ok"] = rep.floor_ok;
  j["capacity_ok"] = rep.capacity_ok;
  j["burden_ok"] = rep.burden_ok;
  j["classification"] = classification_name(rep.classification);
  j["sup_displacement_over_window"] = rep.sup_displacement_over_window;
  return j;
}

StabilityReport report_from_json(const Json& j) {
  StabilityReport rep;
  rep.displacement = j.at("displacement").get<double>();
  rep.per_path_displacement = j.at("per_path_displacement").get<double>();
  rep.burden_displacement = j.at("burden_displacement").get<double>();
  rep.paths_ok = j.at("paths_ok").get<bool>();
  rep.floor_ok = j.at("floor_ok").get<bool>();
  rep.capacity_ok = j.at("capacity_ok").get<bool>();
  rep.burden_ok = j.at("burden_ok").get<bool>();
  rep.classification = j.at("classification").get<std::string>() == "stable"
                           ? Classification::Stable
                           : Classification::Unstable;
  rep.sup_displacement_over_window =
      j.at("sup_displacement_over_window").get<double>();
  return rep;
}

}  // namespace

std::string summary_to_csv(const EnsembleSummary& summary,
                           const ExperimentConfig& cfg) {
  const char* scenario = variant_name(variant_of(cfg.scenario));
  const char* controller = controller_name(cfg.controller.variant);
  std::ostringstream out;
  out << "run_id,scenario,controller,displacement,burden_displacement,"
         "paths_ok,floor_ok,capacity_ok,burden_ok,classification\r\n";
  for (const RunResult& r : summary.runs) {
    out << r.run_id << ',' << csv_field(scenario) << ',' << csv_field(controller)
        << ',';
    if (r.report) {
      const StabilityReport& rep = *r.report;
      out << fmt9(rep.displacement) << ',' << fmt9(rep.burden_displacement)
          << ',' << (rep.paths_ok ? "true" : "false") << ','
          << (rep.floor_ok ? "true" : "false") << ','
          << (rep.capacity_ok ? "true" : "false") << ','
          << (rep.burden_ok ? "true" : "false") << ','
          << classification_name(rep.classification);
    } else {
      out << ",,,,,,error";
    }
    out << "\r\n";
  }
  return out.str();
}

std::string summary_to_json(const EnsembleSummary& summary,
                            const ExperimentConfig& cfg) {
  Json j;
  j["scenario"] = variant_name(variant_of(cfg.scenario));
  j["controller"] = controller_name(cfg.controller.variant);
  j["fraction_stable"] = summary.fraction_stable;
  j["displacement_stats"] = {{"min", summary.displacement_min},
                             {"median", summary.displacement_median},
                             {"max", summary.displacement_max}};
  Json runs = Json::array();
  for (const RunResult& r : summary.runs) {
    Json jr;
    jr["run_id"] = r.run_id;
    jr["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
    jr["report"] = r.report ? report_to_json(*r.report) : Json(nullptr);
    runs.push_back(jr);
  }
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

EnsembleSummary summary_from_json(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("summary: JSON parse failure: ") + e.what());
  }
  try {
    EnsembleSummary s;
    s.fraction_stable = j.at("fraction_stable").get<double>();
    const Json& stats = j.at("displacement_stats");
    s.displacement_min = stats.at("min").get<double>();
    s.displacement_median = stats.at("median").get<double>();
    s.displacement_max = stats.at("max").get<double>();
    for (const Json& jr : j.at("runs")) {
      RunResult r;
      r.run_id = jr.at("run_id").get<int>();
      if (!jr.at("error").is_null()) r.error = jr.at("error").get<std::string>();
      if (!jr.at("report").is_null())
        r.report = report_from_json(jr.at("report"));
      s.runs.push_back(std::move(r));
    }
    return s;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("summary: malformed document: ") + e.what());
  }
}

void emit_report(const EnsembleSummary& summary, const ExperimentConfig& cfg,
                 ReportFormat format, const std::string& dest) {
  std::string body = format == ReportFormat::Csv ? summary_to_csv(summary, cfg)
                                                 : summary_to_json(summary, cfg);
  if (dest == "-") {
    std::cout << body;
    if (!std::cout) throw IoError("failed writing report to stdout");
    return;
  }
  std::ofstream out(dest, std::ios::binary);
  if (!out) throw IoError("cannot open '" + dest + "' for writing");
  out << body;
  if (!out) throw IoError("failed writing report to '" + dest + "'");
}

void write_trajectory_csv(const Trajectory& traj, const Network& net,
                          std::ostream& out) {
  out << "time,path_id,rate\r\n";
  for (const TrajectorySample& s : traj.samples) {
    for (std::size_t p = 0; p < net.paths().size(); ++p) {
      out << fmt9(s.time) << ',' << csv_field(net.paths()[p].id) << ','
          << fmt9(s.alloc.rates[p]) << "\r\n";
    }
  }
}

void write_trajectory_csv(const Trajectory& traj, const Network& net,
                          const std::string& dest) {
  if (dest == "-") {
    write_trajectory_csv(traj, net, std::cout);
    if (!std::cout) throw IoError("failed writing trajectory to stdout");
    return;
  }
  std::ofstream out(dest, std::ios::binary);
  if (!out) throw IoError("cannot open '" + dest + "' for writing");
  write_trajectory_csv(traj, net, out);
  if (!out) throw IoError("failed writing trajectory to '" + dest + "'");
}

}  // namespace mptcplab
