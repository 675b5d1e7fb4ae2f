#pragma once

#include "pmbm/estimator.hpp"
#include "pmbm/metrics.hpp"
#include "pmbm/scenario.hpp"
#include "pmbm/tracker.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace pmbm {

enum class MetricKind { ospa2, gospa };

struct RunOptions {
    MetricKind metric = MetricKind::ospa2;
    Ospa2Params ospa;
    /// Existence threshold of the estimator; negative selects the mode default.
    double estimate_threshold = -1.0;
    EndEstimate end_estimate = EndEstimate::map;
    /// Validate density invariants after every step.
    bool check_invariants = false;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::vector<MetricRow> rows;
    double mean_cycle_ms = 0.0;
    std::size_t final_estimates = 0;
    std::size_t final_truth = 0;
    std::size_t invariant_violations = 0;
};

/// Per-step estimates produced by a tracker run.
using EstimateCallback = std::function<void(TimeStep, const std::vector<Trajectory>&, const TrackerState&)>;

/// Runs the tracker over a measurement log. The callback sees the estimates after each step.
TrackerState run_tracker(std::shared_ptr<const TrackerModels> models, const TrackerConfig& cfg,
                         const MeasurementLog& log, double estimate_threshold, EndEstimate how,
                         const EstimateCallback& on_step);

/// Metric of an estimate against the ground truth at step k.
MetricRow evaluate_step(const std::vector<Trajectory>& est, const std::vector<Trajectory>& truth, TimeStep k,
                        const RunOptions& opt);

/// Simulates the scenario with `seed`, tracks it and evaluates every step.
RunResult run_single(const ScenarioConfig& scenario, const TrackerConfig& cfg, std::uint64_t seed,
                     const RunOptions& opt = {});

struct MonteCarloReport {
    std::vector<MetricRow> mean_rows;
    double mean_cycle_ms = 0.0;
    std::vector<RunResult> runs;

    [[nodiscard]] double mean_total() const;
};

/// Runs with seeds scenario.seed, scenario.seed + 1, ... in parallel and averages per step.
MonteCarloReport run_monte_carlo(const ScenarioConfig& scenario, const TrackerConfig& cfg, std::size_t runs,
                                 const RunOptions& opt = {}, unsigned threads = 0);

}  // namespace pmbm
