// Microbenchmarks of the sequence backends, the k-best assignment and full tracker cycles.

#include "pmbm/assignment.hpp"
#include "pmbm/gauss_seq.hpp"
#include "pmbm/scenario.hpp"
#include "pmbm/tracker.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

using namespace pmbm;

namespace {

SeqBackend backend_of(int i) { return i == 0 ? SeqBackend::moment : i == 1 ? SeqBackend::info : SeqBackend::lscan; }

// predict + update of a sequence that already spans range(1) steps
void BM_SeqPredictUpdate(benchmark::State& state) {
    const SeqBackend b = backend_of(static_cast<int>(state.range(0)));
    const auto steps = state.range(1);
    const ModelLG m = constant_velocity_2d(1.0, 1.0, 1.0);
    SeqDensity s = SeqDensity::single(b, 2, 0, Eigen::Vector4d(0, 0, 1, 1), Eigen::Matrix4d::Identity() * 10.0);
    for (int k = 1; k < steps; ++k) s = update(predict(s, m), m, Eigen::Vector2d(k, k)).seq;
    const Eigen::Vector2d z(static_cast<double>(steps), static_cast<double>(steps));
    for (auto _ : state) {
        auto u = update(predict(s, m), m, z);
        benchmark::DoNotOptimize(u.loglik);
    }
    state.SetLabel(b == SeqBackend::moment ? "moment" : b == SeqBackend::info ? "info" : "lscan L=2");
}
BENCHMARK(BM_SeqPredictUpdate)->ArgsProduct({{0, 1, 2}, {10, 50, 200}});

void BM_MurtyKBest(benchmark::State& state) {
    const auto n = state.range(0);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    Eigen::MatrixXd c(2 * n, n);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(murty_kbest(c, static_cast<std::size_t>(state.range(1))).size());
}
BENCHMARK(BM_MurtyKBest)->ArgsProduct({{5, 20, 50}, {1, 10, 100}});

// full scenario run; the time per iteration covers every predict + update of the scenario
void BM_TrackerScenario(benchmark::State& state) {
    ScenarioConfig c = preset_scenario(static_cast<int>(state.range(0)));
    c.K = 30;
    if (c.truth_mode == TruthMode::scripted) {
        for (auto& t : c.script) t.death = std::min<TimeStep>(t.death, c.K - 1);
    }
    const auto sim = generate_scenario(c, 1);
    const auto models = make_models(c);
    TrackerConfig cfg;
    cfg.backend = backend_of(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        TrackerState s = make_tracker(models, cfg);
        for (std::size_t k = 0; k < sim.log.scans.size(); ++k) {
            if (k > 0) s = predict(std::move(s));
            s = update(std::move(s), sim.log.scans[k]);
        }
        benchmark::DoNotOptimize(s.density.globals.size());
    }
    state.SetItemsProcessed(state.iterations() * c.K);
}
BENCHMARK(BM_TrackerScenario)->ArgsProduct({{1, 3}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
