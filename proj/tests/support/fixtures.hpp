#pragma once

// Small tracking fixtures shared by the unit and acceptance tests, plus comparison of a
// tracker posterior against the exhaustive oracle.

#include "brute_force_pmbm.hpp"
#include "point_pmbm.hpp"

#include "pmbm/estimator.hpp"
#include "pmbm/rng.hpp"
#include "pmbm/tracker.hpp"
#include "pmbm/window_marginal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fixtures {

struct Fixture {
    std::shared_ptr<const pmbm::TrackerModels> models;
    oracle::Params params;
    std::vector<std::vector<Eigen::VectorXd>> scans;
    std::string name;
};

inline Eigen::MatrixXd cv_F(double T) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Identity(4, 4);
    F(0, 2) = T;
    F(1, 3) = T;
    return F;
}

inline Eigen::MatrixXd cv_Q(double T, double sv) {
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(4, 4);
    const double q3 = T * T * T / 3.0, q2 = T * T / 2.0;
    Q(0, 0) = Q(1, 1) = q3;
    Q(2, 2) = Q(3, 3) = T;
    Q(0, 2) = Q(2, 0) = Q(1, 3) = Q(3, 1) = q2;
    return sv * sv * Q;
}

inline Eigen::MatrixXd pos_H() {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 4);
    H(0, 0) = H(1, 1) = 1.0;
    return H;
}

struct FixtureSpec {
    int K = 5;
    int targets = 2;
    int max_per_scan = 2;
    int max_total = 7;
    double ps = 0.9;
    double pd = 0.8;
    double clutter_rate = 0.5;
    int birth_terms = 2;
    bool all = true;
    double gate_prob = 1.0;
};

// Random fixture: targets start near birth means, detections are dropped at random and
// clutter appears near the targets so that associations stay ambiguous.
inline Fixture make_fixture(const FixtureSpec& sp, std::uint64_t seed) {
    pmbm::SplitMix64 rng(seed, 7);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double T = 1.0, sv = 0.5, sr = 1.0;
    const pmbm::SurveillanceRegion region{-100.0, 100.0, -100.0, 100.0};

    Fixture f;
    f.name = "seed " + std::to_string(seed);
    pmbm::BirthModel birth;
    for (int b = 0; b < sp.birth_terms; ++b) {
        Eigen::VectorXd m(4);
        m << 6.0 * b - 3.0, 0.0, 1.0, 0.0;
        Eigen::MatrixXd P = Eigen::Vector4d(16.0, 16.0, 1.0, 1.0).asDiagonal();
        birth.components.push_back({0.3 / sp.birth_terms, m, P});
    }
    pmbm::SensorModel sensor;
    sensor.pd = sp.pd;
    sensor.clutter_rate = sp.clutter_rate;
    sensor.region = region;
    sensor.gate_prob = sp.gate_prob;
    const pmbm::ModelLG motion(cv_F(T), cv_Q(T, sv), pos_H(), sr * sr * Eigen::MatrixXd::Identity(2, 2));
    f.models = std::make_shared<const pmbm::TrackerModels>(
        pmbm::TrackerModels{motion, birth, sensor, pmbm::SurvivalModel{sp.ps}});

    f.params.F = motion.F();
    f.params.Q = motion.Q();
    f.params.H = motion.H();
    f.params.R = motion.R();
    for (const auto& c : birth.components) f.params.birth.push_back({c.weight, c.mean, c.cov});
    f.params.ps = sp.ps;
    f.params.pd = sp.pd;
    f.params.clutter = sp.clutter_rate / region.area();
    f.params.all = sp.all;

    std::vector<Eigen::Vector4d> x;
    for (int t = 0; t < sp.targets; ++t) x.emplace_back(6.0 * t - 3.0 + n01(rng), n01(rng), 1.0, 0.3 * n01(rng));
    int total = 0;
    for (int k = 0; k < sp.K; ++k) {
        std::vector<Eigen::VectorXd> scan;
        for (auto& s : x) {
            if (k > 0) s = cv_F(T) * s + Eigen::Vector4d(0, 0, sv * n01(rng), sv * n01(rng));
            if (u01(rng) < sp.pd && static_cast<int>(scan.size()) < sp.max_per_scan && total < sp.max_total) {
                scan.push_back(Eigen::Vector2d(s(0) + sr * n01(rng), s(1) + sr * n01(rng)));
                ++total;
            }
        }
        if (u01(rng) < 0.3 && static_cast<int>(scan.size()) < sp.max_per_scan && total < sp.max_total) {
            scan.push_back(Eigen::Vector2d(x[0](0) + 4.0 * n01(rng), x[0](1) + 4.0 * n01(rng)));
            ++total;
        }
        f.scans.push_back(std::move(scan));
    }
    return f;
}

using Key = std::set<oracle::History>;

inline oracle::History to_history(const std::vector<pmbm::MeasurementRef>& h) {
    oracle::History out;
    for (const auto& r : h) out.emplace_back(static_cast<long>(r.k), static_cast<long>(r.index));
    return out;
}

struct Deviation {
    double weight = 0.0;
    double existence = 0.0;
    double pmf = 0.0;
    double mean = 0.0;
    double ppp = 0.0;
    std::size_t globals = 0;
    std::vector<std::string> problems;

    [[nodiscard]] double worst() const { return std::max({weight, existence, pmf, mean, ppp}); }
    [[nodiscard]] std::string summary() const {
        std::ostringstream os;
        os << "globals=" << globals << " dw=" << weight << " dr=" << existence << " dpmf=" << pmf
           << " dmean=" << mean << " dppp=" << ppp;
        for (const auto& p : problems) os << "; " << p;
        return os.str();
    }
};

// Compares a trajectory-tracker posterior with the exhaustive oracle at the same step.
inline Deviation compare_with_oracle(const pmbm::TrackerState& s, const oracle::BruteForcePmbm& o) {
    Deviation d;
    const auto& p = s.density;
    const int nx = s.models->motion.nx();
    struct Cell {
        const pmbm::LocalHypothesis* h;
    };
    std::map<Key, std::pair<double, std::map<oracle::History, Cell>>> mine;
    for (const auto& g : p.globals) {
        Key key;
        std::map<oracle::History, Cell> cells;
        for (std::size_t i = 0; i < p.tracks.size(); ++i) {
            const auto& h = p.tracks[i].hypotheses[g.choice[i]];
            if (h.history.empty()) continue;
            key.insert(to_history(h.history));
            cells[to_history(h.history)] = {&h};
        }
        if (!g.retired.empty()) d.problems.push_back("unexpected retired measurements");
        if (!mine.emplace(key, std::make_pair(std::exp(g.log_weight), std::move(cells))).second) {
            d.problems.push_back("duplicate association in tracker");
        }
    }
    d.globals = o.globals().size();
    if (mine.size() != o.globals().size()) {
        d.problems.push_back("global count " + std::to_string(mine.size()) + " vs oracle " +
                             std::to_string(o.globals().size()));
    }
    for (const auto& og : o.globals()) {
        Key key;
        for (const auto& t : og.tracks) {
            if (!t.hist.empty()) key.insert(t.hist);
        }
        auto it = mine.find(key);
        if (it == mine.end()) {
            d.problems.push_back("oracle association missing from tracker");
            continue;
        }
        d.weight = std::max(d.weight, std::abs(it->second.first - std::exp(og.logw)));
        for (const auto& t : og.tracks) {
            if (t.hist.empty()) continue;
            const pmbm::LocalHypothesis& h = *it->second.second.at(t.hist).h;
            d.existence = std::max(d.existence, std::abs(h.existence - t.r));
            if (t.r <= 0.0) continue;
            const auto pmf = pmbm::birth_death_pmf(h.density);
            const auto ref = oracle::end_masses(t.f);
            std::set<std::pair<long, long>> support;
            for (const auto& [be, m] : pmf.mass) support.insert({static_cast<long>(be.first), static_cast<long>(be.second)});
            for (const auto& [be, m] : ref) support.insert(be);
            for (const auto& be : support) {
                const double a = pmf.at(be.first, be.second);
                const double b = ref.contains(be) ? ref.at(be) : 0.0;
                d.pmf = std::max(d.pmf, std::abs(a - b));
                if (a > 1e-12 && b > 1e-12) {
                    const auto seq = pmbm::expected_sequence(h.density, be.first, be.second);
                    const Eigen::VectorXd mo = oracle::conditional_last_mean(t.f, be.first, be.second, nx);
                    d.mean = std::max(d.mean, (seq.back() - mo).cwiseAbs().maxCoeff() / (1.0 + mo.cwiseAbs().maxCoeff()));
                }
            }
        }
    }
    // undetected intensity per (birth, last step)
    std::map<std::pair<long, long>, double> mine_ppp;
    for (const auto& c : p.ppp.components) {
        for (std::size_t i = 0; i < c.ends.mass.size(); ++i) {
            mine_ppp[{static_cast<long>(c.birth()), static_cast<long>(c.ends.first) + static_cast<long>(i)}] +=
                c.weight * c.ends.mass[i];
        }
    }
    const auto ref_ppp = oracle::end_masses(o.ppp());
    std::set<std::pair<long, long>> support;
    for (const auto& [be, m] : mine_ppp) support.insert(be);
    for (const auto& [be, m] : ref_ppp) support.insert(be);
    for (const auto& be : support) {
        const double a = mine_ppp.contains(be) ? mine_ppp.at(be) : 0.0;
        const double b = ref_ppp.contains(be) ? ref_ppp.at(be) : 0.0;
        d.ppp = std::max(d.ppp, std::abs(a - b));
    }
    return d;
}

// Runs the exact tracker and the oracle side by side and returns the worst deviation.
inline Deviation run_against_oracle(const Fixture& f, pmbm::TrajectoryMode mode, pmbm::SeqBackend backend) {
    auto cfg = pmbm::TrackerConfig::exact(mode, backend);
    pmbm::TrackerState s = pmbm::make_tracker(f.models, cfg);
    oracle::Params prm = f.params;
    prm.all = mode == pmbm::TrajectoryMode::all;
    oracle::BruteForcePmbm o(prm);
    Deviation worst;
    for (std::size_t k = 0; k < f.scans.size(); ++k) {
        if (k > 0) {
            s = pmbm::predict(std::move(s));
            o.predict();
        }
        s = pmbm::update(std::move(s), f.scans[k]);
        o.update(f.scans[k]);
        Deviation d = compare_with_oracle(s, o);
        worst.weight = std::max(worst.weight, d.weight);
        worst.existence = std::max(worst.existence, d.existence);
        worst.pmf = std::max(worst.pmf, d.pmf);
        worst.mean = std::max(worst.mean, d.mean);
        worst.ppp = std::max(worst.ppp, d.ppp);
        worst.globals = std::max(worst.globals, d.globals);
        for (auto& pr : d.problems) worst.problems.push_back("k=" + std::to_string(k) + ": " + pr);
    }
    return worst;
}

// Point-target PMBM obtained by marginalizing a trajectory posterior to its current step.
inline oracle::PointPmbm to_point(const pmbm::PmbmDensity& p, pmbm::TimeStep k) {
    const pmbm::PmbmDensity m = pmbm::marginalize_pmbm(p, pmbm::AliveQuery(k, k, k, k));
    oracle::PointPmbm out;
    for (const auto& c : m.ppp.components) {
        const auto g = pmbm::last_state(c.seq);
        out.ppp.push_back({c.weight, g.mean, g.cov});
    }
    for (const auto& g : m.globals) {
        oracle::PGlobal pg;
        pg.logw = g.log_weight;
        for (std::size_t i = 0; i < m.tracks.size(); ++i) {
            const auto& h = m.tracks[i].hypotheses[g.choice[i]];
            oracle::PBern b;
            b.r = h.existence;
            b.hist = to_history(h.history);
            for (const auto& c : h.density.components) {
                const auto gs = pmbm::last_state(c.seq);
                b.f.push_back({c.weight, gs.mean, gs.cov});
            }
            pg.tracks.push_back(std::move(b));
        }
        out.globals.push_back(std::move(pg));
    }
    return out;
}

// Largest difference between two Gaussian mixtures, matching components greedily.
inline double mixture_distance(const std::vector<oracle::PComp>& a, const std::vector<oracle::PComp>& b) {
    if (a.size() != b.size()) return INFINITY;
    std::vector<char> used(b.size(), 0);
    double worst = 0.0;
    for (const auto& x : a) {
        std::size_t best = b.size();
        double bd = INFINITY;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double dd = std::abs(x.w - b[j].w) + (x.m - b[j].m).cwiseAbs().maxCoeff() +
                              (x.P - b[j].P).cwiseAbs().maxCoeff();
            if (dd < bd) {
                bd = dd;
                best = j;
            }
        }
        if (best == b.size()) return INFINITY;
        used[best] = 1;
        worst = std::max(worst, bd);
    }
    return worst;
}

// Largest parameter difference between two point PMBMs, matching globals by association.
inline double point_distance(const oracle::PointPmbm& a, const oracle::PointPmbm& b, std::string* why = nullptr) {
    auto index = [](const oracle::PointPmbm& p) {
        std::map<Key, const oracle::PGlobal*> out;
        for (const auto& g : p.globals) {
            Key key;
            for (const auto& t : g.tracks) {
                if (!t.hist.empty()) key.insert(t.hist);
            }
            out[key] = &g;
        }
        return out;
    };
    const auto ia = index(a), ib = index(b);
    if (ia.size() != ib.size() || ia.size() != a.globals.size() || ib.size() != b.globals.size()) {
        if (why) *why = "global hypothesis sets differ";
        return INFINITY;
    }
    double worst = mixture_distance(a.ppp, b.ppp);
    for (const auto& [key, ga] : ia) {
        auto it = ib.find(key);
        if (it == ib.end()) {
            if (why) *why = "association missing";
            return INFINITY;
        }
        const auto* gb = it->second;
        worst = std::max(worst, std::abs(std::exp(ga->logw) - std::exp(gb->logw)));
        std::map<oracle::History, const oracle::PBern*> tb;
        for (const auto& t : gb->tracks) {
            if (!t.hist.empty()) tb[t.hist] = &t;
        }
        for (const auto& t : ga->tracks) {
            if (t.hist.empty()) continue;
            const auto* u = tb.at(t.hist);
            worst = std::max(worst, std::abs(t.r - u->r));
            if (t.r > 0.0 && u->r > 0.0) worst = std::max(worst, mixture_distance(t.f, u->f));
        }
    }
    return worst;
}

}  // namespace fixtures
