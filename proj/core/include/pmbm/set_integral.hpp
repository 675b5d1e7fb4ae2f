#pragma once

#include "pmbm/trajectory.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace pmbm {

/// Trajectory on a finite grid: birth step, last step and one cell index per step.
struct DiscreteTrajectory {
    TimeStep beta = 0;
    TimeStep epsilon = 0;
    std::vector<int> cells;

    friend bool operator==(const DiscreteTrajectory&, const DiscreteTrajectory&) = default;
};

/// Finite base space: every (beta, epsilon) pair in `pairs` with each state taken from
/// num_cells grid points. By default all pairs inside the window are allowed.
struct DiscreteTrajectorySpace {
    TimeWindow window;
    int num_cells = 1;
    std::vector<std::pair<TimeStep, TimeStep>> pairs;

    DiscreteTrajectorySpace(TimeWindow w, int cells);
    DiscreteTrajectorySpace(TimeWindow w, int cells, std::vector<std::pair<TimeStep, TimeStep>> allowed);

    /// Every single trajectory of the space, in a fixed order.
    [[nodiscard]] std::vector<DiscreteTrajectory> enumerate() const;
};

using SetDensityFn = std::function<double(const std::vector<DiscreteTrajectory>&)>;

/// Sum over n = 0..max_cardinality of 1/n! times the sum of f over all n-tuples of
/// trajectories of the space (repetition included).
double trajectory_set_integral(const SetDensityFn& f, int max_cardinality, const DiscreteTrajectorySpace& space);

}  // namespace pmbm
