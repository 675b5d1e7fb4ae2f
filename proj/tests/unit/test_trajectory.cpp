#include "pmbm/trajectory.hpp"

#include "discrete_surrogate.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pmbm;

namespace {

oracle::DiscreteSeq flat(TimeStep b, TimeStep e) {
    oracle::DiscreteSeq s{b, e, {}};
    s.pmf[std::vector<int>(static_cast<std::size_t>(e - b + 1), 0)] = 1.0;
    return s;
}

oracle::DMix mix_of(std::initializer_list<std::tuple<double, TimeStep, TimeStep>> parts) {
    oracle::DMix m(MixtureKind::density);
    for (const auto& [w, b, e] : parts) m.components.push_back({w, flat(b, e), EndPmf::single(e)});
    return m;
}

}  // namespace

TEST(TimeWindow, RejectsInvertedOrNegative) {
    EXPECT_THROW(TimeWindow(3, 2), std::invalid_argument);
    EXPECT_THROW(TimeWindow(-1, 2), std::invalid_argument);
    const TimeWindow w(2, 5);
    EXPECT_EQ(w.length(), 4);
    EXPECT_TRUE(w.contains(TimeWindow(3, 5)));
    EXPECT_FALSE(w.contains(TimeWindow(1, 5)));
    EXPECT_TRUE(w.intersects(TimeWindow(5, 9)));
    EXPECT_FALSE(w.intersects(TimeWindow(6, 9)));
}

TEST(Trajectory, LengthMustMatchStates) {
    std::vector<Eigen::VectorXd> s(3, Eigen::VectorXd::Zero(2));
    EXPECT_NO_THROW(Trajectory(4, 6, s));
    EXPECT_THROW(Trajectory(4, 7, s), std::invalid_argument);
    EXPECT_THROW(Trajectory(5, 4, {}), std::invalid_argument);
    const Trajectory t(4, 6, s);
    EXPECT_EQ(t.length(), 3);
    EXPECT_TRUE(t.alive_at(6));
    EXPECT_FALSE(t.alive_at(7));
}

TEST(BirthDeathPmf, SingleComponent) {
    const auto pmf = birth_death_pmf(mix_of({{1.0, 2, 5}}));
    ASSERT_EQ(pmf.mass.size(), 1u);
    EXPECT_DOUBLE_EQ(pmf.at(2, 5), 1.0);
}

TEST(BirthDeathPmf, TwoEndTimes) {
    const auto pmf = birth_death_pmf(mix_of({{0.7, 1, 3}, {0.3, 1, 4}}));
    EXPECT_DOUBLE_EQ(pmf.at(1, 3), 0.7);
    EXPECT_DOUBLE_EQ(pmf.at(1, 4), 0.3);
    EXPECT_NEAR(pmf.total(), 1.0, 1e-12);
}

TEST(BirthDeathPmf, DuplicateSupportIsSummed) {
    const auto pmf = birth_death_pmf(mix_of({{0.5, 2, 2}, {0.5, 2, 2}}));
    ASSERT_EQ(pmf.mass.size(), 1u);
    EXPECT_DOUBLE_EQ(pmf.at(2, 2), 1.0);
}

TEST(BirthDeathPmf, RejectsIntensityAndEmpty) {
    auto m = mix_of({{0.5, 2, 2}});
    m.kind = MixtureKind::intensity;
    EXPECT_THROW(birth_death_pmf(m), std::invalid_argument);
    EXPECT_THROW(birth_death_pmf(oracle::DMix(MixtureKind::density)), std::invalid_argument);
}

TEST(BirthDeathPmf, SpreadEndPmfContributesPerStep) {
    oracle::DMix m(MixtureKind::density);
    m.components.push_back({1.0, flat(0, 3), EndPmf{1, {0.2, 0.3, 0.5}}});
    const auto pmf = birth_death_pmf(m);
    EXPECT_DOUBLE_EQ(pmf.at(0, 1), 0.2);
    EXPECT_DOUBLE_EQ(pmf.at(0, 2), 0.3);
    EXPECT_DOUBLE_EQ(pmf.at(0, 3), 0.5);
    const auto eps = pmf.epsilon_marginal();
    EXPECT_DOUBLE_EQ(eps.at(2), 0.3);
}

// property: random density mixtures always give a pmf of total mass one
TEST(BirthDeathPmf, RandomMixturesSumToOne) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::uniform_int_distribution<int> steps(0, 6), count(1, 6);
    for (int rep = 0; rep < 300; ++rep) {
        oracle::DMix m(MixtureKind::density);
        const int n = count(rng);
        double tot = 0.0;
        for (int i = 0; i < n; ++i) {
            const TimeStep b = steps(rng);
            const TimeStep e = b + steps(rng);
            const TimeStep f = b + std::uniform_int_distribution<TimeStep>(0, e - b)(rng);
            std::vector<double> mass(static_cast<std::size_t>(e - f + 1));
            double s = 0.0;
            for (auto& v : mass) s += (v = u(rng));
            for (auto& v : mass) v /= s;
            const double w = u(rng);
            tot += w;
            m.components.push_back({w, flat(b, e), EndPmf{f, mass}});
        }
        for (auto& c : m.components) c.weight /= tot;
        EXPECT_EQ(validate_mixture(m), "");
        for (const auto& [key, mass] : birth_death_pmf(m).mass) {
            EXPECT_LE(key.first, key.second);
            EXPECT_GE(mass, 0.0);
        }
        EXPECT_NEAR(birth_death_pmf(m).total(), 1.0, 1e-12);
    }
}

TEST(Materialize, SplitsSpreadComponents) {
    oracle::DMix m(MixtureKind::density);
    oracle::DiscreteSeq s{0, 2, {}};
    s.pmf[{0, 0, 0}] = 0.5;
    s.pmf[{0, 1, 1}] = 0.5;
    m.components.push_back({1.0, s, EndPmf{1, {0.4, 0.6}}});
    const auto out = materialize(m);
    ASSERT_EQ(out.components.size(), 2u);
    EXPECT_DOUBLE_EQ(out.components[0].weight, 0.4);
    EXPECT_EQ(out.components[0].top(), 1);
    EXPECT_DOUBLE_EQ(out.components[0].seq.at({0, 1}), 0.5);
    EXPECT_EQ(out.components[1].top(), 2);
}

TEST(PruneComponents, DropsRelativeToTotalAndRenormalizes) {
    auto m = mix_of({{0.9995, 0, 1}, {0.0005, 0, 2}});
    const auto out = prune_components(m, 1e-3);
    ASSERT_EQ(out.components.size(), 1u);
    EXPECT_DOUBLE_EQ(out.components[0].weight, 1.0);
    auto ppp = mix_of({{0.5, 0, 1}, {0.0001, 0, 2}});
    ppp.kind = MixtureKind::intensity;
    const auto kept = prune_components(ppp, 1e-3);
    ASSERT_EQ(kept.components.size(), 1u);
    EXPECT_DOUBLE_EQ(kept.components[0].weight, 0.5);
}

TEST(ValidateMixture, ReportsBadWeights) {
    auto m = mix_of({{0.7, 0, 1}, {0.2, 0, 2}});
    EXPECT_NE(validate_mixture(m), "");
    m.components[1].weight = 0.3;
    EXPECT_EQ(validate_mixture(m), "");
    m.components[1].weight = -0.3;
    EXPECT_NE(validate_mixture(m), "");
}
