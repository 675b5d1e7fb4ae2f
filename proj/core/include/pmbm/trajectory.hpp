#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pmbm {

using TimeStep = std::int64_t;

/// Closed interval of consecutive time steps alpha..gamma.
struct TimeWindow {
    TimeStep alpha = 0;
    TimeStep gamma = 0;

    TimeWindow() = default;
    TimeWindow(TimeStep a, TimeStep g) : alpha(a), gamma(g) {
        if (a < 0 || g < a) {
            throw std::invalid_argument("TimeWindow requires 0 <= alpha <= gamma");
        }
    }

    [[nodiscard]] std::int64_t length() const { return gamma - alpha + 1; }
    [[nodiscard]] bool contains(TimeStep k) const { return alpha <= k && k <= gamma; }
    [[nodiscard]] bool contains(const TimeWindow& o) const {
        return alpha <= o.alpha && o.gamma <= gamma;
    }
    [[nodiscard]] bool intersects(const TimeWindow& o) const {
        return alpha <= o.gamma && o.alpha <= gamma;
    }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// A single trajectory: birth step, last step and the state at every step in between.
struct Trajectory {
    TimeStep beta = 0;
    TimeStep epsilon = 0;
    std::vector<Eigen::VectorXd> states;

    Trajectory() = default;
    Trajectory(TimeStep b, TimeStep e, std::vector<Eigen::VectorXd> s)
        : beta(b), epsilon(e), states(std::move(s)) {
        if (e < b || static_cast<std::int64_t>(states.size()) != e - b + 1) {
            throw std::invalid_argument("Trajectory length must equal epsilon - beta + 1");
        }
    }

    [[nodiscard]] std::int64_t length() const { return epsilon - beta + 1; }
    [[nodiscard]] bool alive_at(TimeStep k) const { return beta <= k && k <= epsilon; }
    [[nodiscard]] const Eigen::VectorXd& state_at(TimeStep k) const {
        return states.at(static_cast<std::size_t>(k - beta));
    }
};

/// Joint pmf of (birth step, last step).
struct BirthDeathPmf {
    std::map<std::pair<TimeStep, TimeStep>, double> mass;

    [[nodiscard]] double total() const {
        double s = 0.0;
        for (const auto& [key, m] : mass) s += m;
        return s;
    }
    [[nodiscard]] double at(TimeStep beta, TimeStep epsilon) const {
        auto it = mass.find({beta, epsilon});
        return it == mass.end() ? 0.0 : it->second;
    }
    /// Marginal over the last step.
    [[nodiscard]] std::map<TimeStep, double> epsilon_marginal() const {
        std::map<TimeStep, double> out;
        for (const auto& [key, m] : mass) out[key.second] += m;
        return out;
    }
    /// Marginal over the birth step.
    [[nodiscard]] std::map<TimeStep, double> beta_marginal() const {
        std::map<TimeStep, double> out;
        for (const auto& [key, m] : mass) out[key.first] += m;
        return out;
    }
};

/// pmf over the last step of one mixture component, stored for first..first+size-1.
/// The final entry always corresponds to the last step spanned by the state sequence,
/// so earlier entries describe trajectories that ended before the sequence's last step.
struct EndPmf {
    TimeStep first = 0;
    std::vector<double> mass{1.0};

    [[nodiscard]] TimeStep last() const {
        return first + static_cast<TimeStep>(mass.size()) - 1;
    }
    [[nodiscard]] double at(TimeStep e) const {
        if (e < first || e > last()) return 0.0;
        return mass[static_cast<std::size_t>(e - first)];
    }
    [[nodiscard]] double total() const {
        double s = 0.0;
        for (double m : mass) s += m;
        return s;
    }
    static EndPmf single(TimeStep e) { return EndPmf{e, {1.0}}; }
};

enum class MixtureKind { density, intensity };

/// One weighted component of a trajectory mixture. The state sequence density spans
/// seq.first()..seq.last(); the end pmf spreads the component over possible last steps,
/// the state density for an earlier end being the marginal of seq over the shorter window.
template <class Seq>
struct BasicComponent {
    double weight = 0.0;
    Seq seq;
    EndPmf ends;

    [[nodiscard]] TimeStep birth() const { return seq.first(); }
    [[nodiscard]] TimeStep top() const { return seq.last(); }
    [[nodiscard]] bool exact() const { return ends.mass.size() == 1; }
    /// Last step when the component has a single end time.
    [[nodiscard]] TimeStep end() const { return ends.first; }
};

/// Mixture over trajectories. Used both for Bernoulli trajectory densities (weights sum to
/// one) and for PPP intensities (weights sum to the expected number of trajectories).
template <class Seq>
struct BasicTrajectoryMixture {
    MixtureKind kind = MixtureKind::density;
    std::vector<BasicComponent<Seq>> components;

    BasicTrajectoryMixture() = default;
    explicit BasicTrajectoryMixture(MixtureKind k) : kind(k) {}

    [[nodiscard]] bool empty() const { return components.empty(); }
    [[nodiscard]] std::size_t size() const { return components.size(); }
    [[nodiscard]] double total_weight() const {
        double s = 0.0;
        for (const auto& c : components) s += c.weight;
        return s;
    }
    /// Total weight of components whose end pmf puts mass on step k.
    [[nodiscard]] double mass_ending_at(TimeStep k) const {
        double s = 0.0;
        for (const auto& c : components) s += c.weight * c.ends.at(k);
        return s;
    }
};

/// pmf of (birth, last step) implied by a trajectory mixture density.
template <class Seq>
BirthDeathPmf birth_death_pmf(const BasicTrajectoryMixture<Seq>& mix) {
    if (mix.kind != MixtureKind::density) {
        throw std::invalid_argument("birth_death_pmf requires a density mixture");
    }
    if (mix.empty()) throw std::invalid_argument("birth_death_pmf of an empty mixture");
    BirthDeathPmf pmf;
    for (const auto& c : mix.components) {
        for (std::size_t i = 0; i < c.ends.mass.size(); ++i) {
            const double m = c.weight * c.ends.mass[i];
            if (m <= 0.0) continue;
            pmf.mass[{c.birth(), c.ends.first + static_cast<TimeStep>(i)}] += m;
        }
    }
    return pmf;
}

/// Expands every component with a spread end pmf into one exact component per end step.
/// Requires marginalize_steps(seq, TimeWindow) to be findable for Seq.
template <class Seq>
BasicTrajectoryMixture<Seq> materialize(const BasicTrajectoryMixture<Seq>& mix) {
    BasicTrajectoryMixture<Seq> out(mix.kind);
    for (const auto& c : mix.components) {
        if (c.exact()) {
            out.components.push_back(c);
            continue;
        }
        for (std::size_t i = 0; i < c.ends.mass.size(); ++i) {
            const double m = c.ends.mass[i];
            if (m <= 0.0) continue;
            const TimeStep e = c.ends.first + static_cast<TimeStep>(i);
            BasicComponent<Seq> x{c.weight * m,
                                  e == c.top() ? c.seq
                                               : Seq(marginalize_steps(c.seq, TimeWindow(c.birth(), e))),
                                  EndPmf::single(e)};
            out.components.push_back(std::move(x));
        }
    }
    return out;
}

/// Drops components whose weight is below rel_threshold times the mixture total and
/// renormalizes density mixtures.
template <class Seq>
BasicTrajectoryMixture<Seq> prune_components(BasicTrajectoryMixture<Seq> mix, double rel_threshold) {
    const double total = mix.total_weight();
    if (total <= 0.0) return mix;
    std::erase_if(mix.components,
                  [&](const auto& c) { return c.weight < rel_threshold * total; });
    if (mix.kind == MixtureKind::density) {
        const double kept = mix.total_weight();
        if (kept > 0.0) {
            for (auto& c : mix.components) c.weight /= kept;
        }
    }
    return mix;
}

/// Invariant check; returns an empty string when the mixture is valid.
template <class Seq>
std::string validate_mixture(const BasicTrajectoryMixture<Seq>& mix) {
    for (const auto& c : mix.components) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) return "negative or non-finite weight";
        if (c.ends.last() != c.top()) return "end pmf does not terminate at the sequence end";
        if (c.ends.first < c.birth()) return "end pmf starts before birth";
        const double t = c.ends.total();
        if (std::abs(t - 1.0) > 1e-9) return "end pmf not normalized";
    }
    if (mix.kind == MixtureKind::density && !mix.empty()) {
        if (std::abs(mix.total_weight() - 1.0) > 1e-9) return "density weights do not sum to one";
    }
    return {};
}

}  // namespace pmbm
