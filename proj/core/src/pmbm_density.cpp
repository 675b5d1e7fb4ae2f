#include "pmbm/pmbm_density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pmbm {

namespace {

double log_sum_exp(const std::vector<GlobalHypothesis>& globals) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& g : globals) mx = std::max(mx, g.log_weight);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (const auto& g : globals) s += std::exp(g.log_weight - mx);
    return mx + std::log(s);
}

// Drops globals below the relative threshold and beyond the cap, keeping original order.
void threshold_globals(std::vector<GlobalHypothesis>& globals, double global_w, std::size_t cap) {
    if (globals.empty()) return;
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& g : globals) mx = std::max(mx, g.log_weight);
    if (global_w > 0.0) {
        const double cut = mx + std::log(global_w);
        std::erase_if(globals, [&](const GlobalHypothesis& g) { return g.log_weight < cut && g.log_weight != mx; });
    }
    cap = std::max<std::size_t>(cap, 1);
    if (globals.size() <= cap) return;
    std::vector<std::size_t> order(globals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return globals[a].log_weight > globals[b].log_weight;
    });
    order.resize(cap);
    std::sort(order.begin(), order.end());
    std::vector<GlobalHypothesis> kept;
    kept.reserve(cap);
    for (auto i : order) kept.push_back(std::move(globals[i]));
    globals = std::move(kept);
}

}  // namespace

PmbmDensity normalize(PmbmDensity p) {
    if (p.globals.empty()) throw std::invalid_argument("normalize: no global hypotheses");
    const double lse = log_sum_exp(p.globals);
    if (!std::isfinite(lse)) throw std::invalid_argument("normalize: all global weights are zero");
    for (auto& g : p.globals) g.log_weight -= lse;
    return p;
}

double global_weight(const PmbmDensity& p, const GlobalHypothesis& g) {
    if (g.choice.size() != p.tracks.size()) throw std::invalid_argument("global hypothesis does not match track table");
    double s = 0.0;
    for (std::size_t i = 0; i < g.choice.size(); ++i) {
        if (g.choice[i] >= p.tracks[i].hypotheses.size()) throw std::invalid_argument("invalid local hypothesis index");
        s += p.tracks[i].hypotheses[g.choice[i]].log_weight;
    }
    return s;
}

std::size_t best_global(const PmbmDensity& p) {
    if (p.globals.empty()) throw std::invalid_argument("density has no global hypotheses");
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.globals.size(); ++i) {
        const auto& a = p.globals[i];
        const auto& b = p.globals[best];
        if (a.log_weight > b.log_weight || (a.log_weight == b.log_weight && a.choice < b.choice)) best = i;
    }
    return best;
}

PmbmDensity compact(PmbmDensity p) {
    for (std::size_t t = 0; t < p.tracks.size(); ++t) {
        auto& hyps = p.tracks[t].hypotheses;
        std::vector<char> used(hyps.size(), 0);
        for (const auto& g : p.globals) used[g.choice[t]] = 1;
        std::vector<std::size_t> remap(hyps.size(), 0);
        std::vector<LocalHypothesis> kept;
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            if (!used[h]) continue;
            remap[h] = kept.size();
            kept.push_back(std::move(hyps[h]));
        }
        if (kept.size() == hyps.size()) {
            hyps = std::move(kept);
            continue;
        }
        hyps = std::move(kept);
        for (auto& g : p.globals) g.choice[t] = remap[g.choice[t]];
    }
    return p;
}

bool retire_dead_tracks(PmbmDensity& p) {
    std::vector<char> dead(p.tracks.size(), 1);
    for (const auto& g : p.globals) {
        for (std::size_t t = 0; t < g.choice.size(); ++t) {
            if (p.tracks[t].hypotheses[g.choice[t]].existence > 0.0) dead[t] = 0;
        }
    }
    if (std::none_of(dead.begin(), dead.end(), [](char d) { return d != 0; })) return false;

    std::vector<std::size_t> keep;
    for (std::size_t t = 0; t < p.tracks.size(); ++t) {
        if (!dead[t]) keep.push_back(t);
    }
    for (auto& g : p.globals) {
        std::vector<std::size_t> choice;
        choice.reserve(keep.size());
        for (std::size_t t = 0; t < g.choice.size(); ++t) {
            if (dead[t]) {
                const auto& h = p.tracks[t].hypotheses[g.choice[t]].history;
                g.retired.insert(g.retired.end(), h.begin(), h.end());
            } else {
                choice.push_back(g.choice[t]);
            }
        }
        g.choice = std::move(choice);
        std::sort(g.retired.begin(), g.retired.end());
    }
    std::vector<Track> tracks;
    tracks.reserve(keep.size());
    for (auto t : keep) tracks.push_back(std::move(p.tracks[t]));
    p.tracks = std::move(tracks);

    // globals that now choose the same hypotheses describe the same density
    std::map<std::vector<std::size_t>, std::size_t> index;
    std::vector<GlobalHypothesis> merged;
    for (auto& g : p.globals) {
        auto [it, inserted] = index.try_emplace(g.choice, merged.size());
        if (inserted) {
            merged.push_back(std::move(g));
            continue;
        }
        auto& m = merged[it->second];
        const double hi = std::max(m.log_weight, g.log_weight);
        const double lo = std::min(m.log_weight, g.log_weight);
        if (g.log_weight > m.log_weight) m.retired = std::move(g.retired);
        m.log_weight = std::isfinite(lo) ? hi + std::log1p(std::exp(lo - hi)) : hi;
    }
    p.globals = std::move(merged);
    return true;
}

PmbmDensity prune(PmbmDensity p, const PruneThresholds& th) {
    std::erase_if(p.ppp.components, [&](const MixtureComponent& c) { return c.weight < th.ppp_w; });
    for (auto& t : p.tracks) {
        for (auto& h : t.hypotheses) {
            if (h.existence > 0.0 && h.existence < th.bern_r) {
                h.existence = 0.0;
                h.density.components.clear();
            }
        }
    }
    if (p.globals.empty()) throw std::invalid_argument("prune: no global hypotheses");
    for (;;) {
        threshold_globals(p.globals, th.global_w, th.cap_M);
        p = compact(std::move(p));
        if (!th.retire_tracks || !retire_dead_tracks(p)) break;
    }
    return normalize(std::move(p));
}

std::vector<std::string> check_invariants(const PmbmDensity& p, bool check_coverage) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& s) { out.push_back(s); };

    if (auto msg = validate_mixture(p.ppp); !msg.empty()) fail("ppp: " + msg);
    if (p.ppp.kind != MixtureKind::intensity) fail("ppp is not an intensity");
    std::set<std::uint64_t> ids;
    for (std::size_t t = 0; t < p.tracks.size(); ++t) {
        const auto& tr = p.tracks[t];
        if (!ids.insert(tr.id).second) fail("duplicate track id");
        if (tr.hypotheses.empty()) fail("track without hypotheses");
        for (std::size_t h = 0; h < tr.hypotheses.size(); ++h) {
            const auto& lh = tr.hypotheses[h];
            std::ostringstream where;
            where << "track " << tr.id << " hypothesis " << h << ": ";
            if (!(lh.existence >= 0.0 && lh.existence <= 1.0)) fail(where.str() + "existence outside [0,1]");
            if (lh.existence > 0.0) {
                if (lh.density.empty()) fail(where.str() + "existing Bernoulli without density");
                if (auto msg = validate_mixture(lh.density); !msg.empty()) fail(where.str() + msg);
                for (const auto& c : lh.density.components) {
                    if (c.top() > p.window.gamma) fail(where.str() + "component beyond current time");
                    if (p.mode == TrajectoryMode::current && (!c.exact() || c.end() != p.window.gamma)) {
                        fail(where.str() + "current-mode component not alive at current time");
                    }
                }
            }
            for (std::size_t i = 1; i < lh.history.size(); ++i) {
                if (lh.history[i].k <= lh.history[i - 1].k) fail(where.str() + "history not strictly increasing in time");
            }
        }
    }
    if (p.globals.empty()) fail("no global hypotheses");
    for (std::size_t gi = 0; gi < p.globals.size(); ++gi) {
        const auto& g = p.globals[gi];
        std::ostringstream where;
        where << "global " << gi << ": ";
        if (g.choice.size() != p.tracks.size()) {
            fail(where.str() + "choice size differs from track count");
            continue;
        }
        std::vector<MeasurementRef> used(g.retired);
        bool ok = true;
        for (std::size_t t = 0; t < g.choice.size(); ++t) {
            if (g.choice[t] >= p.tracks[t].hypotheses.size()) {
                fail(where.str() + "invalid local hypothesis index");
                ok = false;
                break;
            }
            const auto& h = p.tracks[t].hypotheses[g.choice[t]].history;
            used.insert(used.end(), h.begin(), h.end());
        }
        if (!ok || !check_coverage) continue;
        std::sort(used.begin(), used.end());
        if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
            fail(where.str() + "measurement used twice");
        }
        std::size_t expected = 0;
        for (const auto& [k, n] : p.scan_sizes) expected += static_cast<std::size_t>(n);
        bool all_known = std::all_of(used.begin(), used.end(), [&](const MeasurementRef& r) {
            auto it = p.scan_sizes.find(r.k);
            return it != p.scan_sizes.end() && r.index >= 0 && r.index < it->second;
        });
        if (!all_known || used.size() != expected) fail(where.str() + "measurements not covered exactly once");
    }
    if (!p.globals.empty()) {
        double lse = log_sum_exp(p.globals);
        if (std::abs(lse) > 1e-9) fail("global weights not normalized");
    }
    return out;
}

}  // namespace pmbm
