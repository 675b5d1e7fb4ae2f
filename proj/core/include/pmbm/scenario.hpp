#pragma once

#include "pmbm/data_association.hpp"
#include "pmbm/models.hpp"
#include "pmbm/tracker.hpp"
#include "pmbm/trajectory.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace pmbm {

enum class TruthMode { simulated, scripted };

/// Target with fixed birth step and last alive step. Without `init` the initial state is
/// drawn from the birth model.
struct ScriptedTarget {
    TimeStep birth = 0;
    TimeStep death = 0;
    std::optional<Eigen::VectorXd> init;
};

struct ScenarioConfig {
    int K = 100;
    double T = 1.0;
    double sigma_v = 1.0;
    double sigma_r = 1.0;
    double ps = 0.99;
    double pd = 0.9;
    double mu_fa = 0.0;
    SurveillanceRegion region;
    BirthModel birth;
    std::uint64_t seed = 0;
    TruthMode truth_mode = TruthMode::simulated;
    std::vector<ScriptedTarget> script;
    double gate_prob = 0.9999;

    void validate() const;
};

/// Measurement sets for k = 0..K-1; std::nullopt marks steps without data.
struct MeasurementLog {
    std::vector<Scan> scans;
};

struct ScenarioRealization {
    std::vector<Trajectory> truth;
    MeasurementLog log;
};

/// Ground truth and measurements, fully determined by the configuration and seed.
ScenarioRealization generate_scenario(const ScenarioConfig& c);
ScenarioRealization generate_scenario(const ScenarioConfig& c, std::uint64_t seed);

/// Motion, birth, sensor and survival models described by a scenario.
std::shared_ptr<const TrackerModels> make_models(const ScenarioConfig& c);

/// Simulation parameters of scenario 1, 2 or 3 of the evaluation.
ScenarioConfig preset_scenario(int id);

/// Ground truth as known at step k: trajectories born by k, truncated at k.
std::vector<Trajectory> truth_at(const std::vector<Trajectory>& truth, TimeStep k);

}  // namespace pmbm
