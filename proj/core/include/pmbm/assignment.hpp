#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace pmbm {

/// Assignment of every column of a cost matrix to a distinct row.
struct Assignment {
    std::vector<int> row_of_col;
    double cost = 0.0;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Sum of cost(row_of_col[c], c) accumulated in column order.
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& row_of_col);

/// Minimum cost assignment by shortest augmenting paths. Entries equal to +infinity are
/// forbidden. Returns nullopt when no finite assignment exists (including cols > rows).
std::optional<Assignment> solve_assignment(const Eigen::MatrixXd& cost);

/// Minimum cost assignment; among optimal assignments the lexicographically smallest
/// row_of_col is returned. Throws std::invalid_argument when infeasible.
Assignment hungarian_best(const Eigen::MatrixXd& cost);

/// Up to M lowest cost assignments (Murty's partitioning), sorted by cost and then by mapping.
std::vector<Assignment> murty_kbest(const Eigen::MatrixXd& cost, std::size_t M);

}  // namespace pmbm
