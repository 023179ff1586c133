#pragma once

#include <iosfwd>
#include <string>

#include "mptcplab/dynamics.hpp"
#include "mptcplab/experiment.hpp"

namespace mptcplab {

enum class ReportFormat { Csv, Json };

/// One row per run:
/// run_id,scenario,controller,displacement,burden_displacement,paths_ok,
/// floor_ok,capacity_ok,burden_ok,classification
/// Numbers carry 9 significant digits; fields are RFC 4180-quoted when
/// needed. An errored run keeps its row with empty metrics and
/// classification "error".
std::string summary_to_csv(const EnsembleSummary& summary,
                           const ExperimentConfig& cfg);

/// Full nested reports with stable key order.
std::string summary_to_json(const EnsembleSummary& summary,
                            const ExperimentConfig& cfg);

/// Inverse of summary_to_json (ConfigError on malformed input).
EnsembleSummary summary_from_json(const std::string& json_text);

/// Writes to dest (a path, or "-" for stdout). Throws IoError on failure.
void emit_report(const EnsembleSummary& summary, const ExperimentConfig& cfg,
                 ReportFormat format, const std::string& dest);

/// Plot-data export: header "time,path_id,rate", one row per (sample, path).
void write_trajectory_csv(const Trajectory& traj, const Network& net,
                          std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const Network& net,
                          const std::string& dest);

}  // namespace mptcplab
