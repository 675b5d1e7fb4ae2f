#pragma once

#include "pmbm/pmbm_density.hpp"
#include "pmbm/trajectory.hpp"

#include <utility>
#include <vector>

namespace pmbm {

enum class EndEstimate {
    /// Mode of the joint (birth, last step) pmf.
    map,
    /// Most likely birth step, then the conditional mean last step rounded to the nearest step.
    rounded_mean,
};

/// Estimated (birth, last step). Ties go to the smaller last step, then the smaller birth.
std::pair<TimeStep, TimeStep> map_birth_death(const TrajectoryMixture& d, EndEstimate how = EndEstimate::map);

/// Conditional mean of the states given (beta, epsilon).
std::vector<Eigen::VectorXd> expected_sequence(const TrajectoryMixture& d, TimeStep beta, TimeStep epsilon);

/// Existence threshold used by default: 1 for all trajectories, 0.5 for current trajectories.
double default_estimate_threshold(TrajectoryMode mode);

/// Trajectories of the most likely global hypothesis whose existence is at least r_e.
std::vector<Trajectory> extract_set(const PmbmDensity& p, double r_e, EndEstimate how = EndEstimate::map);

}  // namespace pmbm
