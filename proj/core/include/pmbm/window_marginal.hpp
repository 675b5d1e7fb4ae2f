#pragma once

#include "pmbm/data_association.hpp"
#include "pmbm/pmbm_density.hpp"
#include "pmbm/trajectory.hpp"

#include <map>
#include <stdexcept>

namespace pmbm {

/// Keep the states in `keep` of the trajectories that are alive at some step of `alive`.
struct AliveQuery {
    TimeWindow keep;
    TimeWindow alive;

    AliveQuery(TimeWindow keep_steps, TimeWindow alive_steps) : keep(keep_steps), alive(alive_steps) {
        if (!keep.contains(alive)) throw std::invalid_argument("alive window must lie inside the kept window");
    }
    AliveQuery(TimeStep alpha, TimeStep gamma, TimeStep eta, TimeStep zeta)
        : AliveQuery(TimeWindow(alpha, gamma), TimeWindow(eta, zeta)) {}
};

template <class Seq>
struct BasicBernoulli {
    double existence = 0.0;
    BasicTrajectoryMixture<Seq> density{MixtureKind::density};
};

namespace detail {

// Components of the materialized mixture that intersect the alive window, clamped to the
// kept window. Returns the total weight of the retained components.
template <class Seq>
double restrict_components(const BasicTrajectoryMixture<Seq>& mix, const AliveQuery& q,
                           BasicTrajectoryMixture<Seq>& out) {
    double kept = 0.0;
    for (const auto& c : materialize(mix).components) {
        const TimeStep b = c.birth();
        const TimeStep e = c.end();
        if (b > q.alive.gamma || e < q.alive.alpha) continue;
        const TimeStep nb = std::max(b, q.keep.alpha);
        const TimeStep ne = std::min(e, q.keep.gamma);
        BasicComponent<Seq> x{c.weight,
                              (nb == b && ne == c.top()) ? c.seq : Seq(marginalize_steps(c.seq, TimeWindow(nb, ne))),
                              EndPmf::single(ne)};
        kept += c.weight;
        out.components.push_back(std::move(x));
    }
    return kept;
}

}  // namespace detail

/// Bernoulli marginal: r' = r * (weight of alive components), renormalized density.
template <class Seq>
BasicBernoulli<Seq> marginalize_bernoulli(const BasicBernoulli<Seq>& h, const AliveQuery& q) {
    BasicBernoulli<Seq> out;
    if (h.existence <= 0.0 || h.density.empty()) return out;
    const double alive = detail::restrict_components(h.density, q, out.density);
    if (alive <= 0.0) {
        out.density.components.clear();
        return out;
    }
    for (auto& c : out.density.components) c.weight /= alive;
    out.existence = h.existence * alive;
    return out;
}

/// PPP marginal: alive components clamped to the kept window, weights unchanged.
template <class Seq>
BasicTrajectoryMixture<Seq> marginalize_ppp(const BasicTrajectoryMixture<Seq>& ppp, const AliveQuery& q) {
    if (ppp.kind != MixtureKind::intensity) throw std::invalid_argument("marginalize_ppp requires an intensity");
    BasicTrajectoryMixture<Seq> out(MixtureKind::intensity);
    detail::restrict_components(ppp, q, out);
    return out;
}

LocalHypothesis marginalize_bernoulli(const LocalHypothesis& h, const AliveQuery& q);

/// Marginal of a PMBM density. A current-trajectories density only accepts windows ending at
/// its last step. Hypotheses whose marginal existence is zero are kept as r = 0 placeholders
/// and global weights are unchanged.
PmbmDensity marginalize_pmbm(const PmbmDensity& p, const AliveQuery& q);

using TimePmf = std::map<TimeStep, double>;

/// pmf of the birth step of the trajectory started by measurement z, given the PPP before
/// the update at the newest step of the new-track density.
TimePmf birth_pmf(const TrajectoryMixture& new_track_density, const TrajectoryMixture& ppp_prior,
                  const Eigen::VectorXd& z, const TrackerModels& models);

/// pmf of the last step at k for a trajectory last detected at tau and missed since.
TimePmf epsilon_pmf_closed(TimeStep tau, TimeStep k, double ps, double pd);

/// One prediction (to k) and misdetection update of a last-step pmf defined up to k - 1.
TimePmf epsilon_pmf_recursive(const TimePmf& prev, double ps, double pd, TimeStep k);

/// Geometric limit of the last-step pmf as k grows, truncated beyond `upto`.
TimePmf epsilon_pmf_limit(TimeStep tau, TimeStep upto, double ps, double pd);

}  // namespace pmbm
