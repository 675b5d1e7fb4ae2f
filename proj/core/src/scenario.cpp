#include "pmbm/scenario.hpp"

#include "pmbm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pmbm {

namespace {

constexpr int kMaxRedraws = 100000;

Eigen::VectorXd sample_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_L, SplitMix64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Eigen::VectorXd w(mean.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = n01(rng);
    return mean + chol_L * w;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("covariance is not positive definite");
    return llt.matrixL();
}

struct BirthSampler {
    std::vector<double> weights;
    std::vector<Eigen::MatrixXd> chol;
    const BirthModel* model;

    explicit BirthSampler(const BirthModel& b) : model(&b) {
        for (const auto& c : b.components) {
            weights.push_back(c.weight);
            chol.push_back(cholesky_factor(c.cov));
        }
    }
    Eigen::VectorXd draw(SplitMix64& rng) const {
        if (weights.empty()) throw std::invalid_argument("birth model has no components");
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        const std::size_t i = pick(rng);
        return sample_gaussian(model->components[i].mean, chol[i], rng);
    }
};

struct Building {
    TimeStep beta;
    std::vector<Eigen::VectorXd> states;
    bool alive = true;
};

std::vector<Trajectory> finish(std::vector<Building>& b) {
    std::vector<Trajectory> out;
    out.reserve(b.size());
    for (auto& t : b) {
        const auto e = t.beta + static_cast<TimeStep>(t.states.size()) - 1;
        out.emplace_back(t.beta, e, std::move(t.states));
    }
    return out;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (K < 1) throw std::invalid_argument("scenario needs K >= 1");
    if (!(T > 0.0) || !(sigma_v > 0.0) || !(sigma_r > 0.0)) throw std::invalid_argument("T, sigma_v and sigma_r must be positive");
    if (!(ps >= 0.0 && ps <= 1.0)) throw std::invalid_argument("ps must lie in [0, 1]");
    if (!(pd > 0.0 && pd <= 1.0)) throw std::invalid_argument("pd must lie in (0, 1]");
    if (!(mu_fa >= 0.0)) throw std::invalid_argument("mu_fa must be nonnegative");
    region.validate();
    birth.validate();
    for (const auto& s : script) {
        if (s.death < s.birth || s.birth < 0) throw std::invalid_argument("scripted target with death before birth");
        if (s.init && s.init->size() != 4) throw std::invalid_argument("scripted initial state must have 4 entries");
    }
}

std::shared_ptr<const TrackerModels> make_models(const ScenarioConfig& c) {
    c.validate();
    SensorModel sensor;
    sensor.pd = c.pd;
    sensor.clutter_rate = c.mu_fa;
    sensor.region = c.region;
    sensor.gate_prob = c.gate_prob;
    return std::make_shared<const TrackerModels>(
        TrackerModels{constant_velocity_2d(c.T, c.sigma_v, c.sigma_r), c.birth, sensor, SurvivalModel{c.ps}});
}

ScenarioRealization generate_scenario(const ScenarioConfig& c) { return generate_scenario(c, c.seed); }

ScenarioRealization generate_scenario(const ScenarioConfig& c, std::uint64_t seed) {
    c.validate();
    const ModelLG model = constant_velocity_2d(c.T, c.sigma_v, c.sigma_r);
    const Eigen::MatrixXd LQ = cholesky_factor(model.Q());
    const Eigen::MatrixXd LR = cholesky_factor(model.R());
    const Eigen::VectorXd zero4 = Eigen::VectorXd::Zero(4);
    const Eigen::VectorXd zero2 = Eigen::VectorXd::Zero(2);
    SplitMix64 truth_rng(seed, 0);
    SplitMix64 meas_rng(seed, 1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const TimeStep K = c.K;

    std::vector<Building> built;
    if (c.truth_mode == TruthMode::scripted) {
        const BirthSampler sampler(c.birth);
        for (const auto& s : c.script) {
            if (s.birth >= K) continue;
            const TimeStep last = std::min<TimeStep>(s.death, K - 1);
            // redraw until the whole trajectory stays inside the region
            Building b{s.birth, {}, true};
            for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
                b.states.clear();
                Eigen::VectorXd x = s.init ? *s.init : sampler.draw(truth_rng);
                for (TimeStep k = s.birth; k <= last; ++k) {
                    if (k > s.birth) x = sample_gaussian(model.F() * x, LQ, truth_rng);
                    if (!c.region.contains(x(0), x(1))) break;
                    b.states.push_back(x);
                }
                if (static_cast<TimeStep>(b.states.size()) == last - s.birth + 1) break;
            }
            if (static_cast<TimeStep>(b.states.size()) != last - s.birth + 1) {
                throw std::runtime_error("scripted target cannot be kept inside the surveillance region");
            }
            built.push_back(std::move(b));
        }
    } else {
        const BirthSampler sampler(c.birth);
        const double rate = c.birth.expected_births();
        for (TimeStep k = 0; k < K; ++k) {
            for (auto& b : built) {
                if (!b.alive) continue;
                if (u01(truth_rng) >= c.ps) {
                    b.alive = false;
                    continue;
                }
                Eigen::VectorXd x = sample_gaussian(model.F() * b.states.back(), LQ, truth_rng);
                if (!c.region.contains(x(0), x(1))) {
                    b.alive = false;
                    continue;
                }
                b.states.push_back(std::move(x));
            }
            if (rate > 0.0) {
                std::poisson_distribution<int> nb(rate);
                const int n = nb(truth_rng);
                for (int i = 0; i < n; ++i) {
                    Eigen::VectorXd x = sampler.draw(truth_rng);
                    if (c.region.contains(x(0), x(1))) built.push_back(Building{k, {std::move(x)}, true});
                }
            }
        }
    }

    ScenarioRealization out;
    out.truth = finish(built);
    out.log.scans.resize(static_cast<std::size_t>(K));
    std::poisson_distribution<int> nfa(c.mu_fa > 0.0 ? c.mu_fa : 1.0);
    std::uniform_real_distribution<double> ux(c.region.xmin, c.region.xmax);
    std::uniform_real_distribution<double> uy(c.region.ymin, c.region.ymax);
    for (TimeStep k = 0; k < K; ++k) {
        MeasurementSet scan;
        for (const auto& t : out.truth) {
            if (!t.alive_at(k)) continue;
            if (u01(meas_rng) >= c.pd) continue;
            Eigen::VectorXd z = sample_gaussian(model.H() * t.state_at(k), LR, meas_rng);
            if (c.region.contains(z(0), z(1))) scan.push_back(std::move(z));
        }
        const int n = c.mu_fa > 0.0 ? nfa(meas_rng) : 0;
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd z(2);
            z(0) = ux(meas_rng);
            z(1) = uy(meas_rng);
            scan.push_back(std::move(z));
        }
        std::shuffle(scan.begin(), scan.end(), meas_rng);
        out.log.scans[static_cast<std::size_t>(k)] = std::move(scan);
    }
    return out;
}

ScenarioConfig preset_scenario(int id) {
    ScenarioConfig c;
    const Eigen::Vector4d zero = Eigen::Vector4d::Zero();
    auto diag4 = [](double a, double b, double cc, double d) {
        return Eigen::Vector4d(a, b, cc, d).asDiagonal().toDenseMatrix();
    };
    switch (id) {
        case 1: {
            c.K = 100;
            c.sigma_v = 1.0;
            c.sigma_r = 1.0;
            c.ps = 0.95;
            c.pd = 0.99;
            c.mu_fa = 100.0;
            c.region = {-1e4, 1e4, -1e4, 1e4};
            const double s2 = std::sqrt(2.0);
            const double px[9] = {-s2, s2, -s2, s2, 1, -1, 0, 0, 0};
            const double py[9] = {-s2, -s2, s2, s2, 0, 0, 1, -1, 0};
            for (int i = 0; i < 9; ++i) {
                Eigen::VectorXd m = zero;
                m(0) = px[i] * 1e4 / 2.0;
                m(1) = py[i] * 1e4 / 2.0;
                c.birth.components.push_back({1.0 / 9.0, m, diag4(500.0 * 500.0, 500.0 * 500.0, 100.0, 100.0)});
            }
            c.truth_mode = TruthMode::simulated;
            break;
        }
        case 2: {
            c.K = 1000;
            c.sigma_v = 1.0;
            c.sigma_r = 1.0;
            c.ps = 0.99;
            c.pd = 0.75;
            c.mu_fa = 100.0;
            c.region = {-2e4, 2e4, -2e4, 2e4};
            c.birth.components.push_back({0.01, zero, diag4(9e8, 9e8, 100.0, 100.0)});
            c.truth_mode = TruthMode::scripted;
            for (int i = 0; i < 10; ++i) c.script.push_back({10 * (i + 1), 990 - 10 * i, std::nullopt});
            break;
        }
        case 3: {
            c.K = 100;
            c.sigma_v = 0.5;
            c.sigma_r = 10.0;
            c.ps = 0.99;
            c.pd = 0.98;
            c.mu_fa = 1.0;
            c.region = {-1e3, 1e3, -1e3, 1e3};
            const double px[3] = {-335.0, -335.0, -430.0};
            const double py[3] = {45.0, -45.0, 0.0};
            for (int i = 0; i < 3; ++i) {
                Eigen::VectorXd m = zero;
                m(0) = px[i];
                m(1) = py[i];
                c.birth.components.push_back({0.1, m, diag4(150.0 * 150.0, 150.0 * 150.0, 100.0, 100.0)});
            }
            c.truth_mode = TruthMode::scripted;
            // the three targets meet at the origin at the middle of the scenario
            const double mid = 50.0;
            for (int i = 0; i < 3; ++i) {
                Eigen::VectorXd x(4);
                x << px[i], py[i], -px[i] / mid, -py[i] / mid;
                c.script.push_back({0, c.K - 1, x});
            }
            break;
        }
        default: throw std::invalid_argument("scenario id must be 1, 2 or 3");
    }
    return c;
}

std::vector<Trajectory> truth_at(const std::vector<Trajectory>& truth, TimeStep k) {
    std::vector<Trajectory> out;
    for (const auto& t : truth) {
        if (t.beta > k) continue;
        const TimeStep e = std::min(t.epsilon, k);
        std::vector<Eigen::VectorXd> s(t.states.begin(), t.states.begin() + (e - t.beta + 1));
        out.emplace_back(t.beta, e, std::move(s));
    }
    return out;
}

}  // namespace pmbm
