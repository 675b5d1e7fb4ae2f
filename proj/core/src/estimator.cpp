#include "pmbm/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace pmbm {

std::pair<TimeStep, TimeStep> map_birth_death(const TrajectoryMixture& d, EndEstimate how) {
    if (d.empty()) throw std::invalid_argument("map_birth_death of an empty density");
    const BirthDeathPmf pmf = birth_death_pmf(d);
    if (how == EndEstimate::map) {
        std::pair<TimeStep, TimeStep> best{};
        double best_m = -1.0;
        for (const auto& [key, m] : pmf.mass) {
            const bool better = m > best_m || (m == best_m && (key.second < best.second ||
                                                                (key.second == best.second && key.first < best.first)));
            if (better) {
                best = key;
                best_m = m;
            }
        }
        return best;
    }
    TimeStep beta = 0;
    double best_m = -1.0;
    for (const auto& [b, m] : pmf.beta_marginal()) {
        if (m > best_m) {
            best_m = m;
            beta = b;
        }
    }
    double mass = 0.0, mean = 0.0;
    TimeStep lo = std::numeric_limits<TimeStep>::max(), hi = 0;
    for (const auto& [key, m] : pmf.mass) {
        if (key.first != beta) continue;
        mass += m;
        mean += m * static_cast<double>(key.second);
        lo = std::min(lo, key.second);
        hi = std::max(hi, key.second);
    }
    auto eps = static_cast<TimeStep>(std::llround(mean / mass));
    eps = std::clamp(eps, lo, hi);
    // the rounded step may carry no mass; fall back to the nearest supported step
    if (pmf.at(beta, eps) <= 0.0) {
        TimeStep nearest = lo;
        for (const auto& [key, m] : pmf.mass) {
            if (key.first == beta && std::abs(key.second - eps) < std::abs(nearest - eps)) nearest = key.second;
        }
        eps = nearest;
    }
    return {beta, eps};
}

std::vector<Eigen::VectorXd> expected_sequence(const TrajectoryMixture& d, TimeStep beta, TimeStep epsilon) {
    if (epsilon < beta) throw std::invalid_argument("expected_sequence: epsilon < beta");
    const auto len = static_cast<std::size_t>(epsilon - beta + 1);
    Eigen::VectorXd acc;
    double total = 0.0;
    int nx = 0;
    for (const auto& c : d.components) {
        if (c.birth() != beta) continue;
        const double w = c.weight * c.ends.at(epsilon);
        if (w <= 0.0) continue;
        nx = c.seq.nx();
        const Eigen::VectorXd mean = mean_sequence(c.seq).head(static_cast<Eigen::Index>(len) * nx);
        if (acc.size() == 0) acc = Eigen::VectorXd::Zero(mean.size());
        acc += w * mean;
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("expected_sequence: no component with the requested (beta, epsilon)");
    acc /= total;
    std::vector<Eigen::VectorXd> states(len);
    for (std::size_t i = 0; i < len; ++i) states[i] = acc.segment(static_cast<Eigen::Index>(i) * nx, nx);
    return states;
}

double default_estimate_threshold(TrajectoryMode mode) { return mode == TrajectoryMode::all ? 1.0 : 0.5; }

std::vector<Trajectory> extract_set(const PmbmDensity& p, double r_e, EndEstimate how) {
    std::vector<Trajectory> out;
    if (p.globals.empty()) return out;
    const GlobalHypothesis& g = p.globals[best_global(p)];
    for (std::size_t t = 0; t < p.tracks.size(); ++t) {
        const LocalHypothesis& h = p.tracks[t].hypotheses[g.choice[t]];
        if (h.existence <= 0.0 || h.existence < r_e || h.density.empty()) continue;
        const auto [beta, eps] = map_birth_death(h.density, how);
        out.emplace_back(beta, eps, expected_sequence(h.density, beta, eps));
    }
    return out;
}

}  // namespace pmbm
