#include "pmbm/models.hpp"

#include <stdexcept>

namespace pmbm {

double BirthModel::expected_births() const {
    double s = 0.0;
    for (const auto& c : components) s += c.weight;
    return s;
}

void BirthModel::validate() const {
    for (const auto& c : components) {
        if (!(c.weight >= 0.0)) throw std::invalid_argument("birth weight must be nonnegative");
        if (c.cov.rows() != c.mean.size() || c.cov.cols() != c.mean.size()) {
            throw std::invalid_argument("birth mean/covariance dimension mismatch");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
        if (llt.info() != Eigen::Success) {
            throw std::invalid_argument("birth covariance must be positive definite");
        }
    }
}

void SurveillanceRegion::validate() const {
    if (!(xmax > xmin) || !(ymax > ymin)) throw std::invalid_argument("degenerate surveillance region");
}

void SensorModel::validate() const {
    if (!(pd > 0.0 && pd <= 1.0)) throw std::invalid_argument("pd must lie in (0, 1]");
    if (!(clutter_rate >= 0.0)) throw std::invalid_argument("clutter rate must be nonnegative");
    if (!(gate_prob > 0.0 && gate_prob <= 1.0)) throw std::invalid_argument("gate_prob must lie in (0, 1]");
    region.validate();
}

void SurvivalModel::validate() const {
    if (!(ps >= 0.0 && ps <= 1.0)) throw std::invalid_argument("ps must lie in [0, 1]");
}

double qdps(const SurvivalModel& s, const SensorModel& d) { return (1.0 - d.pd) * s.ps; }

TrajectoryMixture birth_intensity_at(const BirthModel& b, TimeStep k, SeqBackend backend, int L) {
    TrajectoryMixture out(MixtureKind::intensity);
    out.components.reserve(b.components.size());
    for (const auto& c : b.components) {
        out.components.push_back({c.weight, SeqDensity::single(backend, L, k, c.mean, c.cov), EndPmf::single(k)});
    }
    return out;
}

double clutter_density(const SensorModel& s, const Eigen::VectorXd& z) {
    if (z.size() < 2 || !s.region.contains(z(0), z(1))) return 0.0;
    return s.clutter_rate / s.volume();
}

}  // namespace pmbm
