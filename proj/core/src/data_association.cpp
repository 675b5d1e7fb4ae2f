#include "pmbm/data_association.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates log(sum exp(x)) incrementally.
struct LogSum {
    double mx = kNegInf;
    double acc = 0.0;
    void add(double x) {
        if (x == kNegInf) return;
        if (x <= mx) {
            acc += std::exp(x - mx);
        } else {
            acc = acc * std::exp(mx - x) + 1.0;
            mx = x;
        }
    }
    [[nodiscard]] double value() const { return mx == kNegInf ? kNegInf : mx + std::log(acc); }
};

}  // namespace

double gate_threshold(double gate_prob, int nz) {
    if (!(gate_prob > 0.0)) throw std::invalid_argument("gate_prob must be positive");
    if (gate_prob >= 1.0) return kInf;
    boost::math::chi_squared dist(static_cast<double>(nz));
    return boost::math::quantile(dist, gate_prob);
}

bool gate(const SeqDensity& seq, const ModelLG& m, const Eigen::VectorXd& z, double gate_prob) {
    const double thr = gate_threshold(gate_prob, m.nz());
    if (!z.allFinite()) return false;
    return innovation_distance2(seq, m, z) <= thr;
}

HypothesisScore score_hypothesis(const LocalHypothesis& h, const MeasurementSet& scan, const TrackerModels& models,
                                 TimeStep k, double gate_threshold2) {
    HypothesisScore s;
    s.log_detect.assign(scan.size(), kNegInf);
    if (h.existence <= 0.0 || h.density.empty()) return s;
    const double pd = models.sensor.pd;
    double rho = 0.0;
    std::vector<LogSum> det(scan.size());
    for (const auto& c : h.density.components) {
        const double a = c.ends.at(k);
        if (a <= 0.0 || c.top() != k) continue;
        rho += c.weight * a;
        const GaussianBlock last = last_state(c.seq);
        const double lw = std::log(c.weight * a);
        for (std::size_t j = 0; j < scan.size(); ++j) {
            const Innovation inn = innovation(last, models.motion, scan[j]);
            if (inn.mahalanobis2 > gate_threshold2) continue;
            det[j].add(lw + inn.log_density);
        }
    }
    const double miss = 1.0 - h.existence * pd * rho;
    s.log_miss = miss > 0.0 ? std::log(miss) : -700.0;
    const double base = std::log(h.existence * pd);
    for (std::size_t j = 0; j < scan.size(); ++j) {
        const double v = det[j].value();
        if (v != kNegInf) s.log_detect[j] = base + v;
    }
    return s;
}

std::vector<double> score_new_tracks(const TrajectoryMixture& ppp, const MeasurementSet& scan,
                                     const TrackerModels& models, TimeStep k, double gate_threshold2) {
    std::vector<LogSum> acc(scan.size());
    const double log_pd = std::log(models.sensor.pd);
    for (const auto& c : ppp.components) {
        const double a = c.ends.at(k);
        if (a <= 0.0 || c.weight <= 0.0 || c.top() != k) continue;
        const GaussianBlock last = last_state(c.seq);
        const double lw = std::log(c.weight * a) + log_pd;
        for (std::size_t j = 0; j < scan.size(); ++j) {
            const Innovation inn = innovation(last, models.motion, scan[j]);
            if (inn.mahalanobis2 > gate_threshold2) continue;
            acc[j].add(lw + inn.log_density);
        }
    }
    std::vector<double> out(scan.size());
    for (std::size_t j = 0; j < scan.size(); ++j) {
        const double clutter = clutter_density(models.sensor, scan[j]);
        acc[j].add(clutter > 0.0 ? std::log(clutter) : kNegInf);
        out[j] = acc[j].value();
    }
    return out;
}

CostMatrix assemble_cost_matrix(const GlobalHypothesis& g, const std::vector<std::vector<HypothesisScore>>& scores,
                                const std::vector<double>& log_new, bool reduce) {
    const std::size_t n = g.choice.size();
    const std::size_t m = log_new.size();
    CostMatrix cm;
    std::vector<const HypothesisScore*> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = &scores[i][g.choice[i]];
        cm.base_cost -= s[i]->log_miss;
    }
    std::vector<std::size_t> track_rows;
    if (reduce) {
        std::vector<char> col_used(m, 0);
        for (std::size_t i = 0; i < n; ++i) {
            bool any = false;
            for (std::size_t j = 0; j < m; ++j) {
                if (s[i]->log_detect[j] != kNegInf) {
                    col_used[j] = 1;
                    any = true;
                }
            }
            if (any) track_rows.push_back(i);
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (col_used[j]) {
                cm.cols.push_back(j);
            } else {
                cm.forced_new.push_back(j);
                cm.base_cost -= log_new[j];
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) track_rows.push_back(i);
        for (std::size_t j = 0; j < m; ++j) cm.cols.push_back(j);
    }
    const std::size_t nc = cm.cols.size();
    const std::size_t nr = track_rows.size() + nc;
    cm.cost = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc), kInf);
    for (std::size_t r = 0; r < track_rows.size(); ++r) {
        const auto* sc = s[track_rows[r]];
        cm.rows.push_back({CostRow::Kind::track, track_rows[r]});
        for (std::size_t c = 0; c < nc; ++c) {
            const double ld = sc->log_detect[cm.cols[c]];
            if (ld != kNegInf) cm.cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = -(ld - sc->log_miss);
        }
    }
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t j = cm.cols[c];
        cm.rows.push_back({CostRow::Kind::new_track, j});
        if (log_new[j] != kNegInf) {
            cm.cost(static_cast<Eigen::Index>(track_rows.size() + c), static_cast<Eigen::Index>(c)) = -log_new[j];
        }
    }
    return cm;
}

CostMatrix build_cost_matrix(const PmbmDensity& p, const GlobalHypothesis& g, const MeasurementSet& scan,
                             const TrackerModels& models, TimeStep k) {
    if (g.choice.size() != p.tracks.size()) throw std::invalid_argument("global hypothesis does not match track table");
    const double thr = gate_threshold(models.sensor.gate_prob, models.motion.nz());
    std::vector<std::vector<HypothesisScore>> scores(p.tracks.size());
    for (std::size_t i = 0; i < p.tracks.size(); ++i) {
        scores[i].resize(p.tracks[i].hypotheses.size());
        scores[i][g.choice[i]] = score_hypothesis(p.tracks[i].hypotheses[g.choice[i]], scan, models, k, thr);
    }
    const auto log_new = score_new_tracks(p.ppp, scan, models, k, thr);
    return assemble_cost_matrix(g, scores, log_new, false);
}

Assignment hungarian_best(const CostMatrix& c) { return hungarian_best(c.cost); }

std::vector<Assignment> murty_kbest(const CostMatrix& c, std::size_t M) { return murty_kbest(c.cost, M); }

}  // namespace pmbm
