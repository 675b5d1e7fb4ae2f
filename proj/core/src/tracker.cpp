#include "pmbm/tracker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace pmbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Removes trailing end-time entries with mass at or below thr and marginalizes the sequence
// to the new last possible step.
void trim_dead_tail(MixtureComponent& c, double thr) {
    bool changed = false;
    while (c.ends.mass.size() > 1 && c.ends.mass.back() <= thr) {
        c.ends.mass.pop_back();
        changed = true;
    }
    if (!changed) return;
    const double t = c.ends.total();
    for (auto& v : c.ends.mass) v /= t;
    c.seq = marginalize_steps(c.seq, TimeWindow(c.birth(), c.ends.last()));
}

// Misdetection at step k applied to one component; returns the factor 1 - pd * P(alive at k).
double miss_component(MixtureComponent& c, TimeStep k, double pd, double end_mass_prune) {
    const double a = c.top() == k ? c.ends.mass.back() : 0.0;
    if (a <= 0.0) return 1.0;
    const double f = 1.0 - pd * a;
    if (f <= 0.0) return 0.0;
    c.ends.mass.back() *= (1.0 - pd);
    for (auto& v : c.ends.mass) v /= f;
    trim_dead_tail(c, end_mass_prune);
    return f;
}

void normalize_weights(TrajectoryMixture& mix) {
    const double t = mix.total_weight();
    if (t > 0.0) {
        for (auto& c : mix.components) c.weight /= t;
    }
}

// Normalizes log component weights in place and returns their log-sum.
double normalize_log_weights(std::vector<double>& lw) {
    double mx = kNegInf;
    for (double v : lw) mx = std::max(mx, v);
    if (mx == kNegInf) return mx;
    double s = 0.0;
    for (double v : lw) s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    for (double& v : lw) v = std::exp(v - lse);
    return lse;
}

// Survival extension of one component for the all-trajectories model.
void extend_all(MixtureComponent& c, TimeStep k, double ps, const ModelLG& motion) {
    if (c.top() != k || ps <= 0.0) return;
    const double a = c.ends.mass.back();
    if (a <= 0.0) return;
    c.ends.mass.back() = a * (1.0 - ps);
    c.ends.mass.push_back(a * ps);
    c.seq = predict(c.seq, motion);
}

LocalHypothesis make_miss(const LocalHypothesis& h, const HypothesisScore& sc, TimeStep k, const TrackerModels& md,
                          const TrackerConfig& cfg) {
    LocalHypothesis out;
    out.history = h.history;
    out.log_weight = h.log_weight + sc.log_miss;
    if (h.existence <= 0.0 || h.density.empty()) {
        out.log_weight = h.log_weight;
        out.existence = 0.0;
        return out;
    }
    const double pd = md.sensor.pd;
    const double r = h.existence;
    if (cfg.mode == TrajectoryMode::current) {
        out.existence = r * (1.0 - pd) / (1.0 - r * pd);
        if (r >= 1.0) out.existence = 1.0;
        if (!(out.existence > 0.0)) {
            out.existence = 0.0;
            return out;
        }
        out.density = h.density;
        return out;
    }
    out.density = h.density;
    double rho = 0.0;
    for (const auto& c : h.density.components) rho += c.weight * c.ends.at(k);
    for (auto& c : out.density.components) c.weight *= miss_component(c, k, pd, cfg.end_mass_prune);
    std::erase_if(out.density.components, [](const MixtureComponent& c) { return !(c.weight > 0.0); });
    const double keep = 1.0 - pd * rho;
    if (out.density.empty() || keep <= 0.0) {
        out.existence = 0.0;
        out.density.components.clear();
        return out;
    }
    normalize_weights(out.density);
    out.existence = r >= 1.0 ? 1.0 : r * keep / (1.0 - r * pd * rho);
    return out;
}

LocalHypothesis make_detection(const LocalHypothesis& h, const HypothesisScore& sc, std::size_t j,
                               const Eigen::VectorXd& z, TimeStep k, const TrackerModels& md, double thr) {
    LocalHypothesis out;
    out.log_weight = h.log_weight + sc.log_detect[j];
    out.existence = 1.0;
    out.history = h.history;
    out.history.push_back({k, static_cast<std::int64_t>(j)});
    std::vector<double> lw;
    for (const auto& c : h.density.components) {
        const double a = c.ends.at(k);
        if (a <= 0.0 || c.top() != k) continue;
        const Innovation inn = innovation(last_state(c.seq), md.motion, z);
        if (inn.mahalanobis2 > thr) continue;
        SeqUpdate u = update(c.seq, md.motion, z);
        lw.push_back(std::log(c.weight * a) + u.loglik);
        out.density.components.push_back({0.0, std::move(u.seq), EndPmf::single(k)});
    }
    normalize_log_weights(lw);
    for (std::size_t i = 0; i < lw.size(); ++i) out.density.components[i].weight = lw[i];
    return out;
}

LocalHypothesis make_new_track(const TrajectoryMixture& ppp, double log_new, std::size_t j, const Eigen::VectorXd& z,
                               TimeStep k, const TrackerModels& md, const TrackerConfig& cfg, double thr) {
    LocalHypothesis out;
    out.log_weight = log_new;
    out.history.push_back({k, static_cast<std::int64_t>(j)});
    const double log_pd = std::log(md.sensor.pd);
    std::vector<double> lw;
    for (const auto& c : ppp.components) {
        const double a = c.ends.at(k);
        if (a <= 0.0 || c.weight <= 0.0 || c.top() != k) continue;
        const Innovation inn = innovation(last_state(c.seq), md.motion, z);
        if (inn.mahalanobis2 > thr) continue;
        SeqUpdate u = update(c.seq, md.motion, z);
        lw.push_back(std::log(c.weight * a) + log_pd + u.loglik);
        out.density.components.push_back({0.0, std::move(u.seq), EndPmf::single(k)});
    }
    const double lse = normalize_log_weights(lw);
    if (lw.empty()) {
        out.existence = 0.0;
        return out;
    }
    for (std::size_t i = 0; i < lw.size(); ++i) out.density.components[i].weight = lw[i];
    out.existence = clutter_density(md.sensor, z) > 0.0 ? std::min(1.0, std::exp(lse - log_new)) : 1.0;
    if (cfg.new_track_prune > 0.0) out.density = prune_components(std::move(out.density), cfg.new_track_prune);
    return out;
}

void check_models(const TrackerModels& m, const TrackerConfig& cfg) {
    m.birth.validate();
    m.sensor.validate();
    m.survival.validate();
    for (const auto& c : m.birth.components) {
        if (c.mean.size() != m.motion.nx()) throw std::invalid_argument("birth state dimension differs from motion model");
    }
    if (cfg.L < 1) throw std::invalid_argument("L must be at least 1");
    if (cfg.max_globals < 1) throw std::invalid_argument("max_globals must be at least 1");
}

PruneThresholds effective_thresholds(const TrackerConfig& cfg) {
    PruneThresholds th = cfg.prune;
    th.cap_M = cfg.max_globals;
    return th;
}

}  // namespace

TrackerConfig TrackerConfig::exact(TrajectoryMode mode, SeqBackend backend, int L) {
    TrackerConfig c;
    c.mode = mode;
    c.backend = backend;
    c.L = L;
    c.max_globals = kUnlimitedGlobals;
    c.pruning = false;
    c.new_track_prune = 0.0;
    c.end_mass_prune = 0.0;
    return c;
}

TrackerState make_tracker(std::shared_ptr<const TrackerModels> models, TrackerConfig config) {
    if (!models) throw std::invalid_argument("tracker models are required");
    check_models(*models, config);
    TrackerState s;
    s.k = 0;
    s.density.mode = config.mode;
    s.density.window = TimeWindow(0, 0);
    s.density.ppp = birth_intensity_at(models->birth, 0, config.backend, config.L);
    s.models = std::move(models);
    s.config = config;
    return s;
}

TrackerState predict_all(TrackerState s) {
    if (s.config.mode != TrajectoryMode::all) throw std::logic_error("predict_all requires all-trajectories mode");
    const auto& md = *s.models;
    const double ps = md.survival.ps;
    auto& p = s.density;
    for (auto& c : p.ppp.components) extend_all(c, s.k, ps, md.motion);
    for (auto& t : p.tracks) {
        for (auto& h : t.hypotheses) {
            if (h.existence <= 0.0) continue;
            for (auto& c : h.density.components) extend_all(c, s.k, ps, md.motion);
        }
    }
    s.k += 1;
    auto born = birth_intensity_at(md.birth, s.k, s.config.backend, s.config.L);
    p.ppp.components.insert(p.ppp.components.end(), born.components.begin(), born.components.end());
    p.window = TimeWindow(0, s.k);
    return s;
}

TrackerState predict_current(TrackerState s) {
    if (s.config.mode != TrajectoryMode::current) throw std::logic_error("predict_current requires current-trajectories mode");
    const auto& md = *s.models;
    const double ps = md.survival.ps;
    auto& p = s.density;
    const TimeStep next = s.k + 1;
    for (auto& c : p.ppp.components) {
        c.weight *= ps;
        if (c.weight > 0.0) {
            c.seq = predict(c.seq, md.motion);
            c.ends = EndPmf::single(next);
        }
    }
    std::erase_if(p.ppp.components, [](const MixtureComponent& c) { return !(c.weight > 0.0); });
    for (auto& t : p.tracks) {
        for (auto& h : t.hypotheses) {
            if (h.existence <= 0.0) continue;
            h.existence *= ps;
            if (h.existence <= 0.0) {
                h.existence = 0.0;
                h.density.components.clear();
                continue;
            }
            for (auto& c : h.density.components) {
                c.seq = predict(c.seq, md.motion);
                c.ends = EndPmf::single(next);
            }
        }
    }
    s.k = next;
    auto born = birth_intensity_at(md.birth, s.k, s.config.backend, s.config.L);
    p.ppp.components.insert(p.ppp.components.end(), born.components.begin(), born.components.end());
    p.window = TimeWindow(0, s.k);
    return s;
}

TrackerState predict(TrackerState s) {
    return s.config.mode == TrajectoryMode::all ? predict_all(std::move(s)) : predict_current(std::move(s));
}

TrackerState update(TrackerState s, const Scan& scan_opt) {
    if (!scan_opt) return s;
    const MeasurementSet& scan = *scan_opt;
    const TrackerModels& md = *s.models;
    const TrackerConfig& cfg = s.config;
    const int nz = md.motion.nz();
    for (const auto& z : scan) {
        if (z.size() != nz) throw std::invalid_argument("measurement dimension mismatch");
        if (!z.allFinite()) throw std::invalid_argument("scan contains non-finite measurements");
    }
    PmbmDensity& p = s.density;
    const TimeStep k = s.k;
    const double thr = gate_threshold(md.sensor.gate_prob, nz);
    const std::size_t n = p.tracks.size();
    const std::size_t m = scan.size();

    std::vector<std::vector<HypothesisScore>> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& h : p.tracks[i].hypotheses) scores[i].push_back(score_hypothesis(h, scan, md, k, thr));
    }
    std::vector<double> log_new = score_new_tracks(p.ppp, scan, md, k, thr);

    // measurements that nothing can explain are discarded from the association
    std::vector<char> dropped(m, 0);
    std::vector<MeasurementRef> dropped_refs;
    for (std::size_t j = 0; j < m; ++j) {
        if (log_new[j] != kNegInf) continue;
        bool explained = false;
        for (const auto& per_track : scores) {
            for (const auto& sc : per_track) explained = explained || sc.log_detect[j] != kNegInf;
        }
        if (!explained) {
            dropped[j] = 1;
            log_new[j] = 0.0;
            dropped_refs.push_back({k, static_cast<std::int64_t>(j)});
        }
    }

    struct Child {
        std::size_t parent;
        std::vector<int> event;
        std::vector<char> is_new;
        double log_weight;
    };
    std::vector<Child> children;
    const bool unlimited = cfg.max_globals == kUnlimitedGlobals;
    for (std::size_t gi = 0; gi < p.globals.size(); ++gi) {
        const GlobalHypothesis& g = p.globals[gi];
        std::size_t budget = kUnlimitedGlobals;
        if (!unlimited) {
            const double share = std::ceil(std::exp(g.log_weight) * static_cast<double>(cfg.max_globals));
            budget = std::max<std::size_t>(1, static_cast<std::size_t>(std::min(share, static_cast<double>(cfg.max_globals))));
        }
        const CostMatrix cm = assemble_cost_matrix(g, scores, log_new, true);
        if (!std::isfinite(cm.base_cost)) continue;
        for (const Assignment& a : murty_kbest(cm.cost, budget)) {
            Child ch{gi, std::vector<int>(n, -1), std::vector<char>(m, 0), 0.0};
            for (auto j : cm.forced_new) {
                if (!dropped[j]) ch.is_new[j] = 1;
            }
            for (std::size_t c = 0; c < a.row_of_col.size(); ++c) {
                const CostRow& row = cm.rows[static_cast<std::size_t>(a.row_of_col[c])];
                if (row.kind == CostRow::Kind::track) {
                    ch.event[row.index] = static_cast<int>(cm.cols[c]);
                } else {
                    ch.is_new[row.index] = 1;
                }
            }
            ch.log_weight = g.log_weight - cm.base_cost - a.cost;
            if (ch.log_weight != kNegInf && !std::isnan(ch.log_weight)) children.push_back(std::move(ch));
        }
    }
    if (children.empty()) {
        throw std::runtime_error("no feasible data association at step " + std::to_string(k));
    }
    if (!unlimited && cfg.pruning && children.size() > cfg.max_globals) {
        std::stable_sort(children.begin(), children.end(),
                         [](const Child& a, const Child& b) { return a.log_weight > b.log_weight; });
        children.resize(cfg.max_globals);
    }

    // local hypotheses of existing tracks, indexed by (parent hypothesis, event)
    std::vector<std::map<std::pair<std::size_t, int>, std::size_t>> index(n);
    for (const auto& ch : children) {
        const auto& g = p.globals[ch.parent];
        for (std::size_t i = 0; i < n; ++i) index[i].try_emplace({g.choice[i], ch.event[i]}, 0);
    }
    std::vector<Track> tracks;
    tracks.reserve(n + m);
    for (std::size_t i = 0; i < n; ++i) {
        Track t;
        t.id = p.tracks[i].id;
        for (auto& [key, idx] : index[i]) {
            idx = t.hypotheses.size();
            const auto& h = p.tracks[i].hypotheses[key.first];
            const auto& sc = scores[i][key.first];
            if (key.second < 0) {
                t.hypotheses.push_back(make_miss(h, sc, k, md, cfg));
            } else {
                const auto j = static_cast<std::size_t>(key.second);
                t.hypotheses.push_back(make_detection(h, sc, j, scan[j], k, md, thr));
            }
        }
        tracks.push_back(std::move(t));
    }
    // one new track per measurement, with "not this track" and "new trajectory" hypotheses
    std::vector<std::array<long, 2>> new_index(m, {-1, -1});
    for (const auto& ch : children) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!dropped[j]) new_index[j][ch.is_new[j] ? 1 : 0] = 0;
        }
    }
    std::vector<long> new_track_pos(m, -1);
    for (std::size_t j = 0; j < m; ++j) {
        if (dropped[j]) continue;
        Track t;
        t.id = p.next_track_id++;
        if (new_index[j][0] >= 0) {
            new_index[j][0] = static_cast<long>(t.hypotheses.size());
            t.hypotheses.push_back(LocalHypothesis{});
        }
        if (new_index[j][1] >= 0) {
            new_index[j][1] = static_cast<long>(t.hypotheses.size());
            t.hypotheses.push_back(make_new_track(p.ppp, log_new[j], j, scan[j], k, md, cfg, thr));
        }
        new_track_pos[j] = static_cast<long>(tracks.size());
        tracks.push_back(std::move(t));
    }

    std::vector<GlobalHypothesis> globals;
    globals.reserve(children.size());
    for (const auto& ch : children) {
        const auto& parent = p.globals[ch.parent];
        GlobalHypothesis g;
        g.log_weight = ch.log_weight;
        g.choice.reserve(tracks.size());
        for (std::size_t i = 0; i < n; ++i) g.choice.push_back(index[i].at({parent.choice[i], ch.event[i]}));
        for (std::size_t j = 0; j < m; ++j) {
            if (!dropped[j]) g.choice.push_back(static_cast<std::size_t>(new_index[j][ch.is_new[j] ? 1 : 0]));
        }
        g.retired = parent.retired;
        if (!dropped_refs.empty()) {
            g.retired.insert(g.retired.end(), dropped_refs.begin(), dropped_refs.end());
            std::sort(g.retired.begin(), g.retired.end());
        }
        globals.push_back(std::move(g));
    }
    p.tracks = std::move(tracks);
    p.globals = std::move(globals);

    // undetected trajectories
    const double pd = md.sensor.pd;
    if (cfg.mode == TrajectoryMode::all) {
        for (auto& c : p.ppp.components) c.weight *= miss_component(c, k, pd, cfg.end_mass_prune);
    } else {
        for (auto& c : p.ppp.components) c.weight *= (1.0 - pd);
    }
    std::erase_if(p.ppp.components, [](const MixtureComponent& c) { return !(c.weight > 0.0); });

    p.scan_sizes[k] = static_cast<std::int64_t>(m);
    p = normalize(std::move(p));
    if (cfg.pruning) p = prune(std::move(p), effective_thresholds(cfg));
    return s;
}

BirthDeathPmf epsilon_bookkeeping(const TrackerState& s, std::size_t track, std::size_t hyp) {
    if (s.config.mode != TrajectoryMode::all) throw std::logic_error("epsilon bookkeeping requires all-trajectories mode");
    const auto& h = s.density.tracks.at(track).hypotheses.at(hyp);
    return birth_death_pmf(h.density);
}

}  // namespace pmbm
