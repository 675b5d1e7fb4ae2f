#include "pmbm/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace pmbm {

TrackerState run_tracker(std::shared_ptr<const TrackerModels> models, const TrackerConfig& cfg,
                         const MeasurementLog& log, double estimate_threshold, EndEstimate how,
                         const EstimateCallback& on_step) {
    const double r_e = estimate_threshold < 0.0 ? default_estimate_threshold(cfg.mode) : estimate_threshold;
    TrackerState s = make_tracker(std::move(models), cfg);
    for (std::size_t k = 0; k < log.scans.size(); ++k) {
        if (k > 0) s = predict(std::move(s));
        s = update(std::move(s), log.scans[k]);
        if (on_step) on_step(s.k, extract_set(s.density, r_e, how), s);
    }
    return s;
}

MetricRow evaluate_step(const std::vector<Trajectory>& est, const std::vector<Trajectory>& truth, TimeStep k,
                        const RunOptions& opt) {
    if (opt.metric == MetricKind::ospa2) return ospa2(est, truth, k, opt.ospa);
    return gospa_step(positions_at(est, k, opt.ospa.position_dims), positions_at(truth, k, opt.ospa.position_dims), k,
                      opt.ospa.c, opt.ospa.p);
}

RunResult run_single(const ScenarioConfig& scenario, const TrackerConfig& cfg, std::uint64_t seed,
                     const RunOptions& opt) {
    const ScenarioRealization sim = generate_scenario(scenario, seed);
    const double r_e = opt.estimate_threshold < 0.0 ? default_estimate_threshold(cfg.mode) : opt.estimate_threshold;
    RunResult res;
    res.seed = seed;
    TrackerState s = make_tracker(make_models(scenario), cfg);
    double total_ms = 0.0;
    std::vector<Trajectory> est;
    for (std::size_t k = 0; k < sim.log.scans.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        if (k > 0) s = predict(std::move(s));
        s = update(std::move(s), sim.log.scans[k]);
        est = extract_set(s.density, r_e, opt.end_estimate);
        const auto t1 = std::chrono::steady_clock::now();
        total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (opt.check_invariants) res.invariant_violations += check_invariants(s.density).size();
        const auto kk = static_cast<TimeStep>(k);
        res.rows.push_back(evaluate_step(est, truth_at(sim.truth, kk), kk, opt));
    }
    res.mean_cycle_ms = sim.log.scans.empty() ? 0.0 : total_ms / static_cast<double>(sim.log.scans.size());
    res.final_estimates = est.size();
    res.final_truth = sim.log.scans.empty() ? 0 : truth_at(sim.truth, static_cast<TimeStep>(sim.log.scans.size()) - 1).size();
    return res;
}

double MonteCarloReport::mean_total() const {
    if (mean_rows.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : mean_rows) s += r.total;
    return s / static_cast<double>(mean_rows.size());
}

MonteCarloReport run_monte_carlo(const ScenarioConfig& scenario, const TrackerConfig& cfg, std::size_t runs,
                                 const RunOptions& opt, unsigned threads) {
    if (runs < 1) throw std::invalid_argument("run_monte_carlo needs at least one run");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));

    MonteCarloReport rep;
    rep.runs.resize(runs);
    std::vector<std::exception_ptr> errors(runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= runs) return;
            try {
                rep.runs[r] = run_single(scenario, cfg, scenario.seed + r, opt);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t r = 0; r < runs; ++r) {
        if (!errors[r]) continue;
        try {
            std::rethrow_exception(errors[r]);
        } catch (const std::exception& e) {
            throw std::runtime_error("Monte Carlo run " + std::to_string(r) + " failed: " + e.what());
        }
    }

    const std::size_t K = rep.runs.front().rows.size();
    rep.mean_rows.assign(K, MetricRow{});
    for (const auto& run : rep.runs) {
        for (std::size_t k = 0; k < K; ++k) {
            auto& m = rep.mean_rows[k];
            const auto& x = run.rows[k];
            m.k = x.k;
            m.loc += x.loc;
            m.miss += x.miss;
            m.fa += x.fa;
            m.card += x.card;
            m.total += x.total;
        }
        rep.mean_cycle_ms += run.mean_cycle_ms;
    }
    const auto n = static_cast<double>(runs);
    for (auto& m : rep.mean_rows) {
        m.loc /= n;
        m.miss /= n;
        m.fa /= n;
        m.card /= n;
        m.total /= n;
    }
    rep.mean_cycle_ms /= n;
    return rep;
}

}  // namespace pmbm
