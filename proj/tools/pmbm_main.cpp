// pmbm: simulate scenarios, run the trajectory tracker, evaluate estimates, Monte Carlo runs.

#include "pmbm/estimator.hpp"
#include "pmbm/io.hpp"
#include "pmbm/monte_carlo.hpp"
#include "pmbm/scenario.hpp"
#include "pmbm/tracker.hpp"
#include "pmbm/window_marginal.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fs = std::filesystem;
using namespace pmbm;

namespace {

struct TrackArgs {
    std::string mode = "all";
    std::string backend = "info";
    int L = 1;
    std::size_t M = 100;
    bool no_prune = false;
    double r_e = -1.0;
    std::string end_estimate = "map";
};

void add_tracker_options(CLI::App* cmd, TrackArgs& a) {
    cmd->add_option("--mode", a.mode, "Trajectory set: all or current")
        ->check(CLI::IsMember({"all", "current"}))
        ->capture_default_str();
    cmd->add_option("--seq-backend", a.backend, "State sequence density: moment, info or lscan")
        ->check(CLI::IsMember({"moment", "info", "lscan"}))
        ->capture_default_str();
    cmd->add_option("--L", a.L, "L-scan window length")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--M", a.M, "Global hypotheses per update")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--no-prune", a.no_prune, "Disable every approximation (exact, exponential cost)");
    cmd->add_option("--r-e", a.r_e, "Existence threshold of the estimator (default 1 for all, 0.5 for current)");
    cmd->add_option("--end-estimate", a.end_estimate, "Birth/death estimate: map or mean")
        ->check(CLI::IsMember({"map", "mean"}))
        ->capture_default_str();
}

TrackerConfig tracker_config(const TrackArgs& a) {
    const TrajectoryMode mode = a.mode == "all" ? TrajectoryMode::all : TrajectoryMode::current;
    const SeqBackend backend = a.backend == "moment" ? SeqBackend::moment
                               : a.backend == "info" ? SeqBackend::info
                                                     : SeqBackend::lscan;
    if (a.no_prune) return TrackerConfig::exact(mode, backend, a.L);
    TrackerConfig c;
    c.mode = mode;
    c.backend = backend;
    c.L = a.L;
    c.max_globals = a.M;
    return c;
}

EndEstimate end_estimate(const TrackArgs& a) {
    return a.end_estimate == "map" ? EndEstimate::map : EndEstimate::rounded_mean;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

std::ifstream open_in(const std::string& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error("cannot open '" + p + "'");
    return is;
}

std::string slurp(const std::string& p) {
    auto is = open_in(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

TimeWindow parse_window(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("window must be given as a:b, got '" + s + "'");
    return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
}

int cmd_simulate(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out) {
    ScenarioConfig c = read_scenario_config(config);
    if (seed) c.seed = *seed;
    const ScenarioRealization r = generate_scenario(c);
    fs::create_directories(out);
    {
        auto os = open_out(fs::path(out) / "measurements.jsonl");
        write_measurements_jsonl(os, r.log);
    }
    {
        auto os = open_out(fs::path(out) / "truth.jsonl");
        write_estimates_record(os, c.K - 1, r.truth);
    }
    {
        auto os = open_out(fs::path(out) / "scenario.json");
        os << scenario_to_json(c) << '\n';
    }
    std::size_t meas = 0;
    for (const auto& s : r.log.scans) meas += s ? s->size() : 0;
    std::cout << "simulated " << c.K << " steps, " << r.truth.size() << " trajectories, " << meas
              << " measurements -> " << out << '\n';
    return 0;
}

int cmd_track(const std::string& scenario, const std::string& measurements, const TrackArgs& a, const std::string& out,
              bool dump_posterior) {
    const ScenarioConfig c = read_scenario_config(scenario);
    auto is = open_in(measurements);
    const MeasurementLog log = read_measurements_jsonl(is);
    fs::create_directories(out);
    auto est = open_out(fs::path(out) / "estimates.jsonl");
    const TrackerConfig cfg = tracker_config(a);
    std::size_t last = 0;
    const TrackerState s = run_tracker(make_models(c), cfg, log, a.r_e, end_estimate(a),
                                       [&](TimeStep k, const std::vector<Trajectory>& set, const TrackerState&) {
                                           write_estimates_record(est, k, set);
                                           last = set.size();
                                       });
    if (dump_posterior) {
        auto os = open_out(fs::path(out) / "posterior.json");
        os << posterior_to_json(s.density, 1) << '\n';
    }
    std::cout << "tracked " << log.scans.size() << " steps, " << s.density.tracks.size() << " tracks, "
              << s.density.globals.size() << " global hypotheses, " << last << " estimated trajectories -> " << out
              << '\n';
    return 0;
}

int cmd_evaluate(const std::string& est_path, const std::string& truth_path, const std::string& metric,
                 const Ospa2Params& prm, const std::string& out) {
    auto ei = open_in(est_path);
    auto ti = open_in(truth_path);
    const auto est = read_estimates_jsonl(ei);
    const auto truth_records = read_estimates_jsonl(ti);
    if (truth_records.empty()) throw std::invalid_argument("truth file has no records");
    std::map<TimeStep, const std::vector<Trajectory>*> by_step;
    for (const auto& [k, set] : truth_records) by_step[k] = &set;
    RunOptions opt;
    opt.metric = metric == "ospa2" ? MetricKind::ospa2 : MetricKind::gospa;
    opt.ospa = prm;
    std::vector<MetricRow> rows;
    for (const auto& [k, set] : est) {
        // a step's own truth record when present, otherwise the full truth truncated at k
        auto it = by_step.lower_bound(k);
        if (it == by_step.end()) throw std::invalid_argument("no truth record covers step " + std::to_string(k));
        rows.push_back(evaluate_step(set, truth_at(*it->second, k), k, opt));
    }
    if (out.empty()) {
        write_metrics_csv(std::cout, rows);
    } else {
        auto os = open_out(out);
        write_metrics_csv(os, rows);
    }
    double mean = 0.0;
    for (const auto& r : rows) mean += r.total;
    if (!rows.empty()) mean /= static_cast<double>(rows.size());
    std::cerr << "mean " << metric << " " << mean << " over " << rows.size() << " steps\n";
    return 0;
}

int cmd_mc(const std::string& config, std::size_t runs, const TrackArgs& a, const std::string& metric,
           const Ospa2Params& prm, unsigned threads, const std::string& out) {
    const ScenarioConfig c = read_scenario_config(config);
    RunOptions opt;
    opt.metric = metric == "ospa2" ? MetricKind::ospa2 : MetricKind::gospa;
    opt.ospa = prm;
    opt.estimate_threshold = a.r_e;
    opt.end_estimate = end_estimate(a);
    const MonteCarloReport rep = run_monte_carlo(c, tracker_config(a), runs, opt, threads);
    if (out.empty()) {
        write_metrics_csv(std::cout, rep.mean_rows);
    } else {
        auto os = open_out(out);
        write_metrics_csv(os, rep.mean_rows);
    }
    std::cerr << runs << " runs, mean " << metric << " " << rep.mean_total() << ", mean cycle " << rep.mean_cycle_ms
              << " ms\n";
    return 0;
}

int cmd_marginalize(const std::string& posterior, const std::string& keep, const std::string& alive,
                    const std::string& out) {
    const PmbmDensity p = posterior_from_json(slurp(posterior));
    const TimeWindow kw = parse_window(keep);
    const TimeWindow aw = alive.empty() ? kw : parse_window(alive);
    const PmbmDensity m = marginalize_pmbm(p, AliveQuery(kw, aw));
    if (out.empty()) {
        std::cout << posterior_to_json(m, 1) << '\n';
    } else {
        auto os = open_out(out);
        os << posterior_to_json(m, 1) << '\n';
    }
    return 0;
}

void add_metric_options(CLI::App* cmd, std::string& metric, Ospa2Params& prm) {
    cmd->add_option("--metric", metric, "ospa2 or gospa")->check(CLI::IsMember({"ospa2", "gospa"}))->capture_default_str();
    cmd->add_option("-c", prm.c, "Cut-off distance")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("-p", prm.p, "Order of the set metric")->check(CLI::Range(1.0, 1e9))->capture_default_str();
    cmd->add_option("-q", prm.q, "Order of the time average (OSPA2)")->check(CLI::Range(1.0, 1e9))->capture_default_str();
    cmd->add_option("-w", prm.w, "Time window length (OSPA2)")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory PMBM filter: simulation, tracking and evaluation"};
    app.require_subcommand(1);

    std::string config, out, scenario, measurements, est, truth, metric = "ospa2", posterior, keep, alive;
    std::optional<std::uint64_t> seed;
    std::size_t runs = 10;
    unsigned threads = 0;
    bool dump_posterior = false;
    TrackArgs targs;
    Ospa2Params prm;

    auto* sim = app.add_subcommand("simulate", "Simulate ground truth and measurements of a scenario");
    sim->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--seed", seed, "Seed (overrides the config)");
    sim->add_option("--out", out, "Output directory")->required();

    auto* track = app.add_subcommand("track", "Run the tracker over a measurement log");
    track->add_option("--scenario", scenario, "Scenario JSON with the models")->required()->check(CLI::ExistingFile);
    track->add_option("--measurements", measurements, "Measurement JSONL")->required()->check(CLI::ExistingFile);
    track->add_option("--out", out, "Output directory")->required();
    track->add_flag("--dump-posterior", dump_posterior, "Write the final posterior to posterior.json");
    add_tracker_options(track, targs);

    auto* eval = app.add_subcommand("evaluate", "Score estimates against ground truth");
    eval->add_option("--est", est, "Estimates JSONL")->required()->check(CLI::ExistingFile);
    eval->add_option("--truth", truth, "Truth JSONL")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", out, "Metrics CSV (default stdout)");
    add_metric_options(eval, metric, prm);

    auto* mc = app.add_subcommand("mc", "Monte Carlo runs of simulation, tracking and evaluation");
    mc->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    mc->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_option("--threads", threads, "Worker threads (0 uses all cores)")->capture_default_str();
    mc->add_option("--out", out, "Mean metrics CSV (default stdout)");
    add_tracker_options(mc, targs);
    add_metric_options(mc, metric, prm);

    auto* marg = app.add_subcommand("marginalize", "Time-marginalize a posterior dump");
    marg->add_option("--posterior", posterior, "Posterior JSON")->required()->check(CLI::ExistingFile);
    marg->add_option("--window", keep, "Kept steps a:b")->required();
    marg->add_option("--alive", alive, "Steps a:b in which trajectories must be alive (default the kept window)");
    marg->add_option("--out", out, "Output JSON (default stdout)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sim) return cmd_simulate(config, seed, out);
        if (*track) return cmd_track(scenario, measurements, targs, out, dump_posterior);
        if (*eval) return cmd_evaluate(est, truth, metric, prm, out);
        if (*mc) return cmd_mc(config, runs, targs, metric, prm, threads, out);
        if (*marg) return cmd_marginalize(posterior, keep, alive, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
