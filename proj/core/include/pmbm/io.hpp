#pragma once

#include "pmbm/metrics.hpp"
#include "pmbm/pmbm_density.hpp"
#include "pmbm/scenario.hpp"
#include "pmbm/trajectory.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace pmbm {

/// Scenario configuration from JSON text. A "preset" key (1, 2 or 3) starts from the
/// corresponding built-in scenario and the remaining keys override it.
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig read_scenario_config(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& c);

/// One JSON object per line: {"k":int,"scan":[[z...],...]} or {"k":int,"scan":null}.
void write_measurements_jsonl(std::ostream& os, const MeasurementLog& log);
MeasurementLog read_measurements_jsonl(std::istream& is);

/// One JSON object per line: {"k":int,"trajectories":[{"beta","epsilon","states"}]}.
void write_estimates_record(std::ostream& os, TimeStep k, const std::vector<Trajectory>& set);
std::vector<std::pair<TimeStep, std::vector<Trajectory>>> read_estimates_jsonl(std::istream& is);

/// CSV with header k,loc,miss,false,card,total.
void write_metrics_csv(std::ostream& os, const std::vector<MetricRow>& rows);

/// Full posterior dump (PPP, tracks, hypotheses with densities, globals), see docs.
std::string posterior_to_json(const PmbmDensity& p, int indent = -1);
PmbmDensity posterior_from_json(const std::string& text);

}  // namespace pmbm
