#include "pmbm/window_marginal.hpp"

#include <cmath>
#include <stdexcept>

namespace pmbm {

LocalHypothesis marginalize_bernoulli(const LocalHypothesis& h, const AliveQuery& q) {
    const auto m = marginalize_bernoulli(BasicBernoulli<SeqDensity>{h.existence, h.density}, q);
    LocalHypothesis out;
    out.log_weight = h.log_weight;
    out.history = h.history;
    out.existence = m.existence;
    out.density = m.density;
    return out;
}

PmbmDensity marginalize_pmbm(const PmbmDensity& p, const AliveQuery& q) {
    if (!p.window.contains(q.keep)) throw std::invalid_argument("query outside the density window");
    if (p.mode == TrajectoryMode::current && q.keep.gamma != p.window.gamma) {
        throw std::invalid_argument("a current-trajectories density can only be marginalized up to its last step");
    }
    PmbmDensity out;
    out.ppp = marginalize_ppp(p.ppp, q);
    out.tracks.reserve(p.tracks.size());
    for (const auto& t : p.tracks) {
        Track nt;
        nt.id = t.id;
        for (const auto& h : t.hypotheses) nt.hypotheses.push_back(marginalize_bernoulli(h, q));
        out.tracks.push_back(std::move(nt));
    }
    out.globals = p.globals;
    out.window = q.keep;
    out.mode = p.mode == TrajectoryMode::current || q.alive.alpha == q.keep.gamma ? TrajectoryMode::current
                                                                                 : TrajectoryMode::all;
    out.next_track_id = p.next_track_id;
    out.scan_sizes = p.scan_sizes;
    return out;
}

TimePmf birth_pmf(const TrajectoryMixture& new_track_density, const TrajectoryMixture& ppp_prior,
                  const Eigen::VectorXd& z, const TrackerModels& models) {
    TimeStep k = -1;
    for (const auto& c : new_track_density.components) k = std::max(k, c.top());
    if (k < 0) {
        for (const auto& c : ppp_prior.components) k = std::max(k, c.top());
    }
    TimePmf out;
    double total = 0.0;
    for (const auto& c : ppp_prior.components) {
        const double a = c.ends.at(k);
        if (a <= 0.0 || c.top() != k) continue;
        const double q = models.sensor.pd * predictive_likelihood(c.seq, models.motion, z);
        const double w = c.weight * a * q;
        out[c.birth()] += w;
        total += w;
    }
    if (out.empty()) throw std::invalid_argument("birth_pmf: no prior component alive at the current step");
    if (!(total > 0.0)) throw std::invalid_argument("birth_pmf: measurement has zero likelihood");
    for (auto& [b, v] : out) v /= total;
    return out;
}

TimePmf epsilon_pmf_closed(TimeStep tau, TimeStep k, double ps, double pd) {
    if (k < tau) throw std::invalid_argument("epsilon_pmf_closed requires k >= tau");
    const double q = (1.0 - pd) * ps;
    if (!(q < 1.0)) throw std::invalid_argument("epsilon_pmf_closed requires (1 - pd) * ps < 1");
    const double qs = 1.0 - ps;
    const auto n = static_cast<double>(k - tau);
    const double qn = std::pow(q, n);
    const double C = qs * (1.0 - qn) / (1.0 - q) + qn;
    TimePmf out;
    double qi = 1.0;
    for (TimeStep i = 0; i < k - tau; ++i) {
        out[tau + i] = qs * qi / C;
        qi *= q;
    }
    out[k] = qn / C;
    return out;
}

TimePmf epsilon_pmf_recursive(const TimePmf& prev, double ps, double pd, TimeStep k) {
    if (prev.empty()) throw std::invalid_argument("epsilon_pmf_recursive: empty pmf");
    if (prev.rbegin()->first > k - 1) throw std::invalid_argument("epsilon_pmf_recursive: pmf extends beyond k - 1");
    TimePmf pred = prev;
    const auto it = pred.find(k - 1);
    const double a = it == pred.end() ? 0.0 : it->second;
    if (it != pred.end()) it->second = a * (1.0 - ps);
    pred[k] = a * ps;
    const double norm = 1.0 - pd * pred[k];
    if (!(norm > 0.0)) throw std::invalid_argument("epsilon_pmf_recursive: degenerate normalizer");
    pred[k] *= (1.0 - pd);
    for (auto& [e, v] : pred) v /= norm;
    return pred;
}

TimePmf epsilon_pmf_limit(TimeStep tau, TimeStep upto, double ps, double pd) {
    const double q = (1.0 - pd) * ps;
    if (!(q < 1.0)) throw std::invalid_argument("epsilon_pmf_limit requires (1 - pd) * ps < 1");
    TimePmf out;
    double qi = 1.0;
    for (TimeStep e = tau; e <= upto; ++e) {
        out[e] = (1.0 - q) * qi;
        qi *= q;
    }
    return out;
}

}  // namespace pmbm
