#pragma once

#include "pmbm/models.hpp"
#include "pmbm/trajectory.hpp"

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace pmbm {

enum class TrajectoryMode { all, current };

/// Measurement j of the scan at step k.
struct MeasurementRef {
    TimeStep k = 0;
    std::int64_t index = 0;

    friend auto operator<=>(const MeasurementRef&, const MeasurementRef&) = default;
};

/// One single-trajectory hypothesis (w, r, f) of a track, together with the measurements it
/// has been associated with.
struct LocalHypothesis {
    double log_weight = 0.0;
    double existence = 0.0;
    TrajectoryMixture density{MixtureKind::density};
    std::vector<MeasurementRef> history;
};

struct Track {
    std::uint64_t id = 0;
    std::vector<LocalHypothesis> hypotheses;
};

/// Choice of one local hypothesis per track (indexed by track position).
/// Measurements of tracks that were removed because they can no longer exist are kept in
/// `retired` so that every global still accounts for every past measurement.
struct GlobalHypothesis {
    std::vector<std::size_t> choice;
    double log_weight = 0.0;
    std::vector<MeasurementRef> retired;
};

struct PmbmDensity {
    TrajectoryMixture ppp{MixtureKind::intensity};
    std::vector<Track> tracks;
    std::vector<GlobalHypothesis> globals{GlobalHypothesis{}};
    TimeWindow window{0, 0};
    TrajectoryMode mode = TrajectoryMode::all;
    std::uint64_t next_track_id = 0;
    /// Number of measurements in every scan processed so far (absent for no-data steps).
    std::map<TimeStep, std::int64_t> scan_sizes;
};

struct PruneThresholds {
    double ppp_w = 1e-3;
    double bern_r = 1e-5;
    /// Relative to the largest global weight.
    double global_w = 1e-4;
    std::size_t cap_M = 100;
    /// Remove tracks whose referenced hypotheses all have r = 0.
    bool retire_tracks = true;
};

/// Log-sum-exp normalization of the global weights; ordering is preserved.
PmbmDensity normalize(PmbmDensity p);

/// Maintenance pass: thresholds PPP components, existence probabilities and global weights,
/// caps the number of globals, compacts hypothesis tables and renormalizes.
PmbmDensity prune(PmbmDensity p, const PruneThresholds& thresholds);

/// Sum of the stored local log weights chosen by g.
double global_weight(const PmbmDensity& p, const GlobalHypothesis& g);

/// Index of the global with the largest weight; ties go to the lexicographically smallest choice.
std::size_t best_global(const PmbmDensity& p);

/// Removes local hypotheses not referenced by any global and remaps the choices.
PmbmDensity compact(PmbmDensity p);

/// Removes tracks whose referenced hypotheses all have r = 0 and merges globals that
/// become identical. Returns true when anything was removed.
bool retire_dead_tracks(PmbmDensity& p);

/// All violated structural invariants as readable messages; empty when the density is valid.
std::vector<std::string> check_invariants(const PmbmDensity& p, bool check_coverage = true);

}  // namespace pmbm
