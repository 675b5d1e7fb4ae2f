#include "pmbm/monte_carlo.hpp"
#include "pmbm/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pmbm;

namespace {

bool same_log(const MeasurementLog& a, const MeasurementLog& b) {
    if (a.scans.size() != b.scans.size()) return false;
    for (std::size_t k = 0; k < a.scans.size(); ++k) {
        if (a.scans[k].has_value() != b.scans[k].has_value()) return false;
        if (!a.scans[k]) continue;
        if (a.scans[k]->size() != b.scans[k]->size()) return false;
        for (std::size_t j = 0; j < a.scans[k]->size(); ++j) {
            if ((*a.scans[k])[j] != (*b.scans[k])[j]) return false;
        }
    }
    return true;
}

ScenarioConfig small_config() {
    ScenarioConfig c = preset_scenario(3);
    c.K = 15;
    for (auto& s : c.script) s.death = 14;
    return c;
}

}  // namespace

TEST(Presets, ParametersPerScenario) {
    const auto a = preset_scenario(1), b = preset_scenario(2), c = preset_scenario(3);
    EXPECT_EQ(a.K, 100);
    EXPECT_EQ(b.K, 1000);
    EXPECT_EQ(c.K, 100);
    EXPECT_DOUBLE_EQ(a.ps, 0.95);
    EXPECT_DOUBLE_EQ(a.pd, 0.99);
    EXPECT_DOUBLE_EQ(b.ps, 0.99);
    EXPECT_DOUBLE_EQ(b.pd, 0.75);
    EXPECT_DOUBLE_EQ(c.sigma_v, 0.5);
    EXPECT_DOUBLE_EQ(c.sigma_r, 10.0);
    EXPECT_DOUBLE_EQ(c.pd, 0.98);
    EXPECT_DOUBLE_EQ(c.mu_fa, 1.0);
    EXPECT_DOUBLE_EQ(a.region.area(), 4e8);
    EXPECT_DOUBLE_EQ(b.region.area(), 1.6e9);
    EXPECT_DOUBLE_EQ(c.region.area(), 4e6);
    EXPECT_THROW(preset_scenario(4), std::invalid_argument);
}

TEST(Presets, ScenarioTwoScript) {
    const auto c = preset_scenario(2);
    ASSERT_EQ(c.script.size(), 10u);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(c.script[static_cast<std::size_t>(i)].birth, 10 * (i + 1));
        EXPECT_EQ(c.script[static_cast<std::size_t>(i)].death, 990 - 10 * i);
    }
}

TEST(Generate, ScriptedTruthFollowsScript) {
    auto c = preset_scenario(2);
    c.K = 200;
    const auto r = generate_scenario(c, 4);
    ASSERT_EQ(r.truth.size(), 10u);
    for (std::size_t i = 0; i < r.truth.size(); ++i) {
        EXPECT_EQ(r.truth[i].beta, 10 * static_cast<TimeStep>(i + 1));
        EXPECT_EQ(r.truth[i].epsilon, 199);
        for (const auto& x : r.truth[i].states) EXPECT_TRUE(c.region.contains(x(0), x(1)));
    }
    EXPECT_EQ(r.log.scans.size(), 200u);
}

TEST(Generate, PerfectSensorNoClutter) {
    auto c = small_config();
    c.pd = 1.0;
    c.mu_fa = 0.0;
    const auto r = generate_scenario(c, 9);
    for (TimeStep k = 0; k < c.K; ++k) {
        std::size_t alive = 0;
        for (const auto& t : r.truth) alive += t.alive_at(k) ? 1 : 0;
        ASSERT_TRUE(r.log.scans[static_cast<std::size_t>(k)].has_value());
        EXPECT_EQ(r.log.scans[static_cast<std::size_t>(k)]->size(), alive);
    }
}

TEST(Generate, DeterministicPerSeed) {
    const auto c = small_config();
    const auto a = generate_scenario(c, 5), b = generate_scenario(c, 5), d = generate_scenario(c, 6);
    EXPECT_TRUE(same_log(a.log, b.log));
    EXPECT_FALSE(same_log(a.log, d.log));
    ASSERT_EQ(a.truth.size(), b.truth.size());
    for (std::size_t i = 0; i < a.truth.size(); ++i) EXPECT_EQ(a.truth[i].states, b.truth[i].states);
    auto s1 = preset_scenario(1);
    s1.K = 20;
    const auto x = generate_scenario(s1, 3), y = generate_scenario(s1, 3);
    EXPECT_TRUE(same_log(x.log, y.log));
    EXPECT_EQ(x.truth.size(), y.truth.size());
}

TEST(Generate, SimulatedStatistics) {
    auto c = preset_scenario(1);
    c.K = 30;
    double births = 0.0, extra = 0.0;
    const int runs = 40;
    for (int s = 0; s < runs; ++s) {
        const auto r = generate_scenario(c, static_cast<std::uint64_t>(s));
        births += static_cast<double>(r.truth.size());
        for (TimeStep k = 0; k < c.K; ++k) {
            double alive = 0.0;
            for (const auto& t : r.truth) alive += t.alive_at(k) ? 1.0 : 0.0;
            extra += static_cast<double>(r.log.scans[static_cast<std::size_t>(k)]->size()) - 0.99 * alive;
        }
        for (const auto& t : r.truth) {
            for (const auto& x : t.states) EXPECT_TRUE(c.region.contains(x(0), x(1)));
        }
    }
    EXPECT_NEAR(births / (runs * c.K), 1.0, 0.1);
    EXPECT_NEAR(extra / (runs * c.K), 100.0, 2.0);
}

TEST(Generate, InvalidConfigs) {
    auto c = small_config();
    c.region = {1, 0, 0, 1};
    EXPECT_THROW(generate_scenario(c), std::invalid_argument);
    c = small_config();
    c.K = 0;
    EXPECT_THROW(generate_scenario(c), std::invalid_argument);
    c = small_config();
    c.script[0].death = -1;
    EXPECT_THROW(generate_scenario(c), std::invalid_argument);
}

TEST(Generate, TruthAtTruncates) {
    const auto r = generate_scenario(small_config(), 1);
    const auto t = truth_at(r.truth, 7);
    ASSERT_EQ(t.size(), 3u);
    for (const auto& x : t) {
        EXPECT_EQ(x.epsilon, 7);
        EXPECT_EQ(x.states.size(), 8u);
    }
}

TEST(Models, FromScenario) {
    const auto c = preset_scenario(3);
    const auto m = make_models(c);
    EXPECT_DOUBLE_EQ(m->sensor.pd, 0.98);
    EXPECT_DOUBLE_EQ(m->survival.ps, 0.99);
    EXPECT_DOUBLE_EQ(m->motion.R()(0, 0), 100.0);
    EXPECT_EQ(m->birth.components.size(), 3u);
}

TEST(MonteCarlo, SingleRunReproducesTrackRun) {
    const auto c = small_config();
    TrackerConfig cfg;
    RunOptions opt;
    opt.check_invariants = true;
    const auto single = run_single(c, cfg, 7, opt);
    const auto again = run_single(c, cfg, 7, opt);
    ASSERT_EQ(single.rows.size(), static_cast<std::size_t>(c.K));
    for (std::size_t k = 0; k < single.rows.size(); ++k) EXPECT_EQ(single.rows[k].total, again.rows[k].total);
    EXPECT_EQ(single.invariant_violations, 0u);

    auto seeded = c;
    seeded.seed = 7;
    const auto mc = run_monte_carlo(seeded, cfg, 1, opt, 1);
    ASSERT_EQ(mc.mean_rows.size(), single.rows.size());
    for (std::size_t k = 0; k < single.rows.size(); ++k) EXPECT_EQ(mc.mean_rows[k].total, single.rows[k].total);
}

TEST(MonteCarlo, ParallelMatchesSerialAndBounds) {
    auto c = small_config();
    c.seed = 11;
    TrackerConfig cfg;
    const auto a = run_monte_carlo(c, cfg, 4, {}, 1);
    const auto b = run_monte_carlo(c, cfg, 4, {}, 4);
    ASSERT_EQ(a.runs.size(), 4u);
    for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(a.runs[r].seed, 11 + r);
    for (std::size_t k = 0; k < a.mean_rows.size(); ++k) {
        EXPECT_EQ(a.mean_rows[k].total, b.mean_rows[k].total);
        EXPECT_GE(a.mean_rows[k].total, 0.0);
        EXPECT_LE(a.mean_rows[k].total, 100.0 + 1e-9);
    }
    EXPECT_GT(a.mean_cycle_ms, 0.0);
    EXPECT_THROW(run_monte_carlo(c, cfg, 0), std::invalid_argument);
}

TEST(MonteCarlo, TracksScenarioThree) {
    const auto c = small_config();
    const auto r = run_single(c, TrackerConfig{}, 2);
    EXPECT_EQ(r.final_truth, 3u);
    EXPECT_EQ(r.final_estimates, 3u);
    EXPECT_LT(r.rows.back().total, 30.0);
}
