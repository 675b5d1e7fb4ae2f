#pragma once

#include "pmbm/assignment.hpp"
#include "pmbm/gauss_seq.hpp"
#include "pmbm/models.hpp"
#include "pmbm/pmbm_density.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pmbm {

using MeasurementSet = std::vector<Eigen::VectorXd>;

/// Models driving one tracker.
struct TrackerModels {
    ModelLG motion;
    BirthModel birth;
    SensorModel sensor;
    SurvivalModel survival;
};

/// Chi-square quantile used as the squared Mahalanobis gate; +infinity when gate_prob >= 1.
double gate_threshold(double gate_prob, int nz);

/// True iff the squared Mahalanobis distance of z's innovation is within the gate.
bool gate(const SeqDensity& seq, const ModelLG& m, const Eigen::VectorXd& z, double gate_prob);

/// Log weight factors of one local hypothesis for the current scan: the miss factor and,
/// per measurement, the detection factor (-infinity when no component gates).
struct HypothesisScore {
    double log_miss = 0.0;
    std::vector<double> log_detect;
};

/// Scores a local hypothesis at step k against a scan.
HypothesisScore score_hypothesis(const LocalHypothesis& h, const MeasurementSet& scan, const TrackerModels& models,
                                 TimeStep k, double gate_threshold2);

/// log(clutter + PD <PPP, likelihood>) for each measurement: the weight of the new-track
/// hypothesis that the measurement is detected.
std::vector<double> score_new_tracks(const TrajectoryMixture& ppp, const MeasurementSet& scan,
                                     const TrackerModels& models, TimeStep k, double gate_threshold2);

struct CostRow {
    enum class Kind { track, new_track } kind = Kind::track;
    /// Track position, or measurement index for a new-track row.
    std::size_t index = 0;
};

/// Assignment problem for one prior global hypothesis. Rows are tracks followed by one
/// new-track row per measurement; columns are measurements. The weight of a child global
/// relative to its parent is exp(-(base_cost + assignment cost)).
struct CostMatrix {
    Eigen::MatrixXd cost;
    std::vector<CostRow> rows;
    std::vector<std::size_t> cols;
    double base_cost = 0.0;
    /// Measurements omitted from the matrix because no track can explain them; they always
    /// start new tracks and their cost is folded into base_cost.
    std::vector<std::size_t> forced_new;
};

/// Builds the assignment problem from precomputed hypothesis scores. With reduce = true,
/// measurements that gate with no track and tracks that gate with no measurement are removed.
CostMatrix assemble_cost_matrix(const GlobalHypothesis& g, const std::vector<std::vector<HypothesisScore>>& scores,
                                const std::vector<double>& log_new, bool reduce);

/// Full (unreduced) cost matrix of global g for a scan.
CostMatrix build_cost_matrix(const PmbmDensity& p, const GlobalHypothesis& g, const MeasurementSet& scan,
                             const TrackerModels& models, TimeStep k);

/// Hungarian / Murty on a CostMatrix.
Assignment hungarian_best(const CostMatrix& c);
std::vector<Assignment> murty_kbest(const CostMatrix& c, std::size_t M);

}  // namespace pmbm
