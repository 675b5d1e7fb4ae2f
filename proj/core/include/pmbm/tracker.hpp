#pragma once

#include "pmbm/data_association.hpp"
#include "pmbm/pmbm_density.hpp"

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>

namespace pmbm {

/// Murty budget meaning "enumerate every association".
inline constexpr std::size_t kUnlimitedGlobals = std::numeric_limits<std::size_t>::max();

struct TrackerConfig {
    TrajectoryMode mode = TrajectoryMode::all;
    SeqBackend backend = SeqBackend::info;
    int L = 1;
    /// Number of global hypotheses generated per update and kept after pruning.
    std::size_t max_globals = 100;
    bool pruning = true;
    PruneThresholds prune;
    /// Relative component weight below which new-track densities drop components.
    double new_track_prune = 1e-3;
    /// Components whose probability of still being alive falls below this stop being extended.
    double end_mass_prune = 1e-5;

    /// Configuration with every approximation disabled (full enumeration, no pruning).
    static TrackerConfig exact(TrajectoryMode mode, SeqBackend backend = SeqBackend::moment, int L = 1);
};

/// Scan at one step; std::nullopt means no measurement set was received (prediction only),
/// which differs from an empty scan.
using Scan = std::optional<MeasurementSet>;

struct TrackerState {
    PmbmDensity density;
    TimeStep k = 0;
    std::shared_ptr<const TrackerModels> models;
    TrackerConfig config;
};

/// Tracker at k = 0 with no detected trajectories and PPP equal to the birth intensity at 0.
TrackerState make_tracker(std::shared_ptr<const TrackerModels> models, TrackerConfig config);

/// Prediction to k + 1 for the set of all trajectories.
TrackerState predict_all(TrackerState s);
/// Prediction to k + 1 for the set of current trajectories.
TrackerState predict_current(TrackerState s);
/// Dispatches on the configured mode.
TrackerState predict(TrackerState s);

/// Measurement update at the current step. A no-data scan leaves the state unchanged.
TrackerState update(TrackerState s, const Scan& scan);

/// Joint (birth, last step) pmf of one local hypothesis of the all-trajectories density.
BirthDeathPmf epsilon_bookkeeping(const TrackerState& s, std::size_t track, std::size_t hyp);

}  // namespace pmbm
