#include "pmbm/assignment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace pmbm;

namespace {

// All injective column -> row maps with their costs, sorted by cost then mapping.
std::vector<Assignment> enumerate(const Eigen::MatrixXd& c) {
    const int rows = static_cast<int>(c.rows()), cols = static_cast<int>(c.cols());
    std::vector<Assignment> out;
    std::vector<int> map(static_cast<std::size_t>(cols));
    std::vector<char> used(static_cast<std::size_t>(rows), 0);
    auto rec = [&](auto&& self, int col) -> void {
        if (col == cols) {
            const double cost = assignment_cost(c, map);
            if (std::isfinite(cost)) out.push_back({map, cost});
            return;
        }
        for (int r = 0; r < rows; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            used[static_cast<std::size_t>(r)] = 1;
            map[static_cast<std::size_t>(col)] = r;
            self(self, col + 1);
            used[static_cast<std::size_t>(r)] = 0;
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), [](const Assignment& a, const Assignment& b) {
        return a.cost != b.cost ? a.cost < b.cost : a.row_of_col < b.row_of_col;
    });
    return out;
}

Eigen::MatrixXd random_int_matrix(int rows, int cols, std::mt19937& rng, int hi = 9) {
    std::uniform_int_distribution<int> u(0, hi);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

}  // namespace

TEST(Hungarian, TwoByTwoPicksAntiDiagonal) {
    const Eigen::Matrix2d c = (Eigen::Matrix2d() << 1, 2, 2, 4).finished();
    const auto a = hungarian_best(Eigen::MatrixXd(c));
    EXPECT_EQ(a.row_of_col, (std::vector<int>{1, 0}));
    EXPECT_DOUBLE_EQ(a.cost, 4.0);
}

TEST(Hungarian, IdentityFavoring) {
    const Eigen::Matrix2d c = (Eigen::Matrix2d() << 0, 9, 9, 0).finished();
    const auto a = hungarian_best(Eigen::MatrixXd(c));
    EXPECT_EQ(a.row_of_col, (std::vector<int>{0, 1}));
    EXPECT_DOUBLE_EQ(a.cost, 0.0);
}

TEST(Hungarian, InfeasibleAndForbidden) {
    Eigen::MatrixXd c(2, 2);
    c << INFINITY, 1, INFINITY, 2;
    EXPECT_FALSE(solve_assignment(c).has_value());
    EXPECT_THROW(hungarian_best(c), std::invalid_argument);
    c << INFINITY, 1, 3, INFINITY;
    const auto a = hungarian_best(c);
    EXPECT_EQ(a.row_of_col, (std::vector<int>{1, 0}));
    EXPECT_DOUBLE_EQ(a.cost, 4.0);
    EXPECT_FALSE(solve_assignment(Eigen::MatrixXd::Zero(1, 2)).has_value());
}

TEST(Hungarian, RectangularUsesBestRows) {
    Eigen::MatrixXd c(4, 2);
    c << 5, 5, 1, 9, 9, 2, 0.5, 0.5;
    const auto a = hungarian_best(c);
    EXPECT_DOUBLE_EQ(a.cost, enumerate(c).front().cost);
}

TEST(Hungarian, TiesAreLexicographic) {
    const Eigen::MatrixXd c = Eigen::MatrixXd::Ones(3, 3);
    EXPECT_EQ(hungarian_best(c).row_of_col, (std::vector<int>{0, 1, 2}));
    Eigen::MatrixXd d(3, 2);
    d << 1, 1, 0, 0, 0, 0;
    EXPECT_EQ(hungarian_best(d).row_of_col, (std::vector<int>{1, 2}));
}

TEST(Hungarian, FuzzAgainstPermutations) {
    std::mt19937 rng(123);
    for (int rep = 0; rep < 1000; ++rep) {
        const auto c = random_int_matrix(4, 4, rng, 20);
        const auto all = enumerate(c);
        const auto a = hungarian_best(c);
        ASSERT_EQ(a.cost, all.front().cost) << rep;
        ASSERT_EQ(a.row_of_col, all.front().row_of_col) << rep;
        ASSERT_EQ(assignment_cost(c, a.row_of_col), a.cost);
    }
}

TEST(Murty, TwoByTwo) {
    const Eigen::Matrix2d c = (Eigen::Matrix2d() << 1, 2, 2, 4).finished();
    const auto ks = murty_kbest(Eigen::MatrixXd(c), 2);
    ASSERT_EQ(ks.size(), 2u);
    EXPECT_DOUBLE_EQ(ks[0].cost, 4.0);
    EXPECT_DOUBLE_EQ(ks[1].cost, 5.0);
    EXPECT_EQ(murty_kbest(Eigen::MatrixXd(c), 10).size(), 2u);
}

TEST(Murty, OneBestIsHungarian) {
    std::mt19937 rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        const auto c = random_int_matrix(4, 3, rng, 5);
        const auto ks = murty_kbest(c, 1);
        ASSERT_EQ(ks.size(), 1u);
        EXPECT_EQ(ks[0], hungarian_best(c));
    }
}

TEST(Murty, ThreeByThreeAllPermutations) {
    Eigen::Matrix3d c;
    c << 4, 1, 3, 2, 0, 5, 3, 2, 2;
    const auto ks = murty_kbest(Eigen::MatrixXd(c), 6);
    const auto all = enumerate(c);
    ASSERT_EQ(ks.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(ks[i].cost, all[i].cost);
        EXPECT_EQ(ks[i].row_of_col, all[i].row_of_col);
    }
}

TEST(Murty, RejectsZeroBudget) { EXPECT_THROW(murty_kbest(Eigen::MatrixXd::Zero(2, 2), 0), std::invalid_argument); }

TEST(Murty, InfeasibleGivesEmpty) {
    Eigen::MatrixXd c(1, 1);
    c << INFINITY;
    EXPECT_TRUE(murty_kbest(c, 3).empty());
}

// property: random matrices up to 5x5 with forbidden entries, integer and real costs
TEST(Murty, PropertyMatchesEnumeration) {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> dim(1, 5);
    std::uniform_real_distribution<double> ur(0.0, 10.0);
    std::bernoulli_distribution forbid(0.15), real(0.5);
    for (int rep = 0; rep < 500; ++rep) {
        const int cols = dim(rng);
        const int rows = std::max(cols, dim(rng));
        const bool use_real = real(rng);
        Eigen::MatrixXd c = random_int_matrix(rows, cols, rng, 9);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                if (use_real) c(i, j) = ur(rng);
                if (forbid(rng)) c(i, j) = INFINITY;
            }
        }
        const auto all = enumerate(c);
        const std::size_t M = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        const auto ks = murty_kbest(c, M);
        ASSERT_EQ(ks.size(), std::min(M, all.size())) << rep;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (use_real) {
                ASSERT_NEAR(ks[i].cost, all[i].cost, 1e-12) << rep;
            } else {
                ASSERT_EQ(ks[i].cost, all[i].cost) << rep;
                ASSERT_EQ(ks[i].row_of_col, all[i].row_of_col) << rep;
            }
            if (i > 0) ASSERT_LE(ks[i - 1].cost, ks[i].cost);
            for (std::size_t j = 0; j < i; ++j) ASSERT_NE(ks[i].row_of_col, ks[j].row_of_col);
        }
    }
}

// heavy ties: rectangular matrices over {0, 1, 2} with forbidden entries
TEST(Hungarian, LexicographicUnderHeavyTies) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> cdim(1, 5), extra(0, 2), val(0, 2);
    std::bernoulli_distribution forbid(0.2);
    int checked = 0;
    for (int rep = 0; rep < 2000; ++rep) {
        const int cols = cdim(rng);
        const int rows = cols + extra(rng);
        Eigen::MatrixXd c(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) c(i, j) = forbid(rng) ? INFINITY : val(rng);
        }
        const auto all = enumerate(c);
        if (all.empty()) {
            EXPECT_THROW(hungarian_best(c), std::invalid_argument);
            continue;
        }
        ++checked;
        const auto h = hungarian_best(c);
        ASSERT_EQ(h.cost, all[0].cost) << rep;
        ASSERT_EQ(h.row_of_col, all[0].row_of_col) << rep;
    }
    EXPECT_GT(checked, 1000);
}
