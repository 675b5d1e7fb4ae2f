#pragma once

#include "pmbm/trajectory.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pmbm {

/// One row of a metric report. `card` combines the miss and false parts.
struct MetricRow {
    TimeStep k = 0;
    double loc = 0.0;
    double miss = 0.0;
    double fa = 0.0;
    double card = 0.0;
    double total = 0.0;
};

struct Ospa2Params {
    double c = 100.0;
    /// Order of the set-level OSPA.
    double p = 1.0;
    /// Order of the time average in the trajectory base distance.
    double q = 1.0;
    /// Window length ending at k.
    int w = 5;
    /// Leading state entries treated as position.
    int position_dims = 2;
};

/// Time-averaged distance between two trajectories over the window steps where at least one
/// exists; infinity-free, at most c. Returns a negative value when neither exists in the window.
double trajectory_base_distance(const Trajectory& a, const Trajectory& b, TimeStep from, TimeStep to,
                                const Ospa2Params& prm);

/// OSPA over trajectories present in the window [k - w + 1, k].
MetricRow ospa2(const std::vector<Trajectory>& est, const std::vector<Trajectory>& truth, TimeStep k,
                const Ospa2Params& prm);

/// Per-step GOSPA with alpha = 2 on positions, normalized by the larger set size.
MetricRow gospa_step(const std::vector<Eigen::VectorXd>& est, const std::vector<Eigen::VectorXd>& truth, TimeStep k,
                     double c, double p);

/// Positions at step k of the trajectories alive at k.
std::vector<Eigen::VectorXd> positions_at(const std::vector<Trajectory>& set, TimeStep k, int position_dims = 2);

}  // namespace pmbm
