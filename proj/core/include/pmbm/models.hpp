#pragma once

#include "pmbm/gauss_seq.hpp"
#include "pmbm/trajectory.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pmbm {

using TrajectoryMixture = BasicTrajectoryMixture<SeqDensity>;
using MixtureComponent = BasicComponent<SeqDensity>;

struct GaussianComponent {
    double weight = 0.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// Poisson birth intensity: per-step expected births split over Gaussian components.
struct BirthModel {
    std::vector<GaussianComponent> components;

    [[nodiscard]] double expected_births() const;
    /// Throws on negative weights or non positive definite covariances.
    void validate() const;
};

/// Axis-aligned rectangle in measurement space.
struct SurveillanceRegion {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;

    [[nodiscard]] double area() const { return (xmax - xmin) * (ymax - ymin); }
    [[nodiscard]] bool contains(double x, double y) const {
        return xmin <= x && x <= xmax && ymin <= y && y <= ymax;
    }
    void validate() const;
};

struct SensorModel {
    double pd = 0.9;
    double clutter_rate = 0.0;
    SurveillanceRegion region;
    double gate_prob = 0.9999;

    [[nodiscard]] double volume() const { return region.area(); }
    [[nodiscard]] double detection_probability(const Eigen::VectorXd& /*x*/) const { return pd; }
    void validate() const;
};

struct SurvivalModel {
    double ps = 0.99;

    [[nodiscard]] double survival_probability(const Eigen::VectorXd& /*x*/) const { return ps; }
    void validate() const;
};

/// (1 - pd) * ps, the per-step probability of surviving undetected.
double qdps(const SurvivalModel& s, const SensorModel& d);

/// Birth intensity at step k: one single-step component per birth component.
TrajectoryMixture birth_intensity_at(const BirthModel& b, TimeStep k, SeqBackend backend = SeqBackend::info,
                                     int L = 1);

/// Uniform clutter density over the surveillance region, zero outside it.
double clutter_density(const SensorModel& s, const Eigen::VectorXd& z);

}  // namespace pmbm
