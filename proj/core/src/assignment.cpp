#include "pmbm/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace pmbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rectangular shortest augmenting path solver (Jonker-Volgenant style, as in Crouse 2016).
// Each of the n rows of c (n <= m columns) gets a distinct column.
class Lsap {
  public:
    explicit Lsap(const Eigen::MatrixXd& c) : c_(c), nr_(static_cast<int>(c.rows())), nc_(static_cast<int>(c.cols())) {}

    std::optional<std::vector<int>> solve() {
        u_.assign(nr_, 0.0);
        v_.assign(nc_, 0.0);
        spc_.assign(nc_, kInf);
        path_.assign(nc_, -1);
        col4row_.assign(nr_, -1);
        row4col_.assign(nc_, -1);
        sr_.assign(nr_, 0);
        sc_.assign(nc_, 0);
        remaining_.assign(nc_, 0);
        for (int cur = 0; cur < nr_; ++cur) {
            double min_val = 0.0;
            const int sink = augment(cur, min_val);
            if (sink < 0) return std::nullopt;
            u_[cur] += min_val;
            for (int i = 0; i < nr_; ++i) {
                if (sr_[i] && i != cur) u_[i] += min_val - spc_[col4row_[i]];
            }
            for (int j = 0; j < nc_; ++j) {
                if (sc_[j]) v_[j] -= min_val - spc_[j];
            }
            int j = sink;
            for (;;) {
                const int i = path_[j];
                row4col_[j] = i;
                std::swap(col4row_[i], j);
                if (i == cur) break;
            }
        }
        return col4row_;
    }

    // Dual potentials after solve(): u per row of c, v per column of c.
    [[nodiscard]] const std::vector<double>& u() const { return u_; }
    [[nodiscard]] const std::vector<double>& v() const { return v_; }

  private:
    int augment(int cur, double& min_val) {
        int num_remaining = nc_;
        for (int it = 0; it < nc_; ++it) remaining_[it] = nc_ - it - 1;
        std::fill(sr_.begin(), sr_.end(), 0);
        std::fill(sc_.begin(), sc_.end(), 0);
        std::fill(spc_.begin(), spc_.end(), kInf);
        int sink = -1;
        int i = cur;
        while (sink == -1) {
            int index = -1;
            double lowest = kInf;
            sr_[i] = 1;
            for (int it = 0; it < num_remaining; ++it) {
                const int j = remaining_[it];
                const double r = min_val + c_(i, j) - u_[i] - v_[j];
                if (r < spc_[j]) {
                    path_[j] = i;
                    spc_[j] = r;
                }
                if (spc_[j] < lowest || (spc_[j] == lowest && row4col_[j] == -1)) {
                    lowest = spc_[j];
                    index = it;
                }
            }
            min_val = lowest;
            if (min_val == kInf || index < 0) return -1;
            const int j = remaining_[index];
            if (row4col_[j] == -1) {
                sink = j;
            } else {
                i = row4col_[j];
            }
            sc_[j] = 1;
            remaining_[index] = remaining_[--num_remaining];
        }
        return sink;
    }

    const Eigen::MatrixXd& c_;
    int nr_, nc_;
    std::vector<double> u_, v_, spc_;
    std::vector<int> path_, col4row_, row4col_, remaining_;
    std::vector<char> sr_, sc_;
};

// Among the optimal assignments, moves to the lexicographically smallest column -> row mapping.
// Optimal mappings are the matchings on zero reduced cost edges that keep every row with a
// negative potential assigned. Columns are fixed in order; a column switches to a smaller row
// when an alternating path on tight edges through the unfixed columns restores a valid matching.
void lex_smallest(const Eigen::MatrixXd& cost, std::vector<int>& row_of_col, const std::vector<double>& u,
                  const std::vector<double>& v) {
    const int nrows = static_cast<int>(cost.rows());
    const int ncols = static_cast<int>(cost.cols());
    double scale = 1.0;
    for (Eigen::Index i = 0; i < cost.size(); ++i) {
        if (std::isfinite(cost.data()[i])) scale = std::max(scale, std::abs(cost.data()[i]));
    }
    const double tol = 1e-12 * scale;
    std::vector<int> owner(static_cast<std::size_t>(nrows), -1);
    for (int c = 0; c < ncols; ++c) owner[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(c)])] = c;
    // columns with a tight edge into each row, ascending
    std::vector<std::vector<int>> tight(static_cast<std::size_t>(nrows));
    bool any_alternative = false;
    for (int r = 0; r < nrows; ++r) {
        for (int c = 0; c < ncols; ++c) {
            const double x = cost(r, c);
            const bool matched = owner[static_cast<std::size_t>(r)] == c;
            if (matched || (std::isfinite(x) && x - u[static_cast<std::size_t>(c)] - v[static_cast<std::size_t>(r)] <= tol)) {
                tight[static_cast<std::size_t>(r)].push_back(c);
                any_alternative = any_alternative || !matched;
            }
        }
    }
    if (!any_alternative) return;
    std::vector<char> must_cover(static_cast<std::size_t>(nrows));
    for (int r = 0; r < nrows; ++r) {
        must_cover[static_cast<std::size_t>(r)] = owner[static_cast<std::size_t>(r)] >= 0 && v[static_cast<std::size_t>(r)] < -tol;
    }

    std::vector<char> good(static_cast<std::size_t>(nrows));
    std::vector<int> next_row(static_cast<std::size_t>(ncols)), via_free(static_cast<std::size_t>(nrows));
    std::vector<int> queue;
    for (int c = 0; c < ncols; ++c) {
        const int t = row_of_col[static_cast<std::size_t>(c)];
        // rows that c may take: taking them starts a chain that ends by occupying or freeing t
        std::fill(good.begin(), good.end(), 0);
        queue.assign(1, t);
        good[static_cast<std::size_t>(t)] = 1;
        bool free_good = false;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int y = queue[qi];
            const auto yy = static_cast<std::size_t>(y);
            if (!free_good && !must_cover[yy] && owner[yy] >= 0) {
                free_good = true;
                for (int f = 0; f < nrows; ++f) {
                    const auto ff = static_cast<std::size_t>(f);
                    if (owner[ff] < 0 && !good[ff]) {
                        good[ff] = 1;
                        via_free[ff] = y;
                        queue.push_back(f);
                    }
                }
            }
            for (int x : tight[yy]) {
                if (x <= c) continue;
                const int mx = row_of_col[static_cast<std::size_t>(x)];
                if (mx == y || good[static_cast<std::size_t>(mx)]) continue;
                good[static_cast<std::size_t>(mx)] = 1;
                next_row[static_cast<std::size_t>(x)] = y;
                queue.push_back(mx);
            }
        }
        int r = -1;
        for (int cand = 0; cand < t && r < 0; ++cand) {
            if (!good[static_cast<std::size_t>(cand)]) continue;
            const auto& tc = tight[static_cast<std::size_t>(cand)];
            if (std::binary_search(tc.begin(), tc.end(), c)) r = cand;
        }
        if (r < 0) continue;
        int taker = c;
        int row = r;
        for (;;) {
            const auto rr = static_cast<std::size_t>(row);
            const int prev = owner[rr];
            owner[rr] = taker;
            if (taker >= 0) row_of_col[static_cast<std::size_t>(taker)] = row;
            if (row == t) break;
            if (prev < 0) {
                taker = -1;
                row = via_free[rr];
            } else {
                taker = prev;
                row = next_row[static_cast<std::size_t>(prev)];
            }
        }
    }
}

// Optimal column -> row mapping of `cost` (rows >= cols), lexicographically smallest among ties.
std::optional<Assignment> solve_raw(const Eigen::MatrixXd& cost) {
    Assignment a;
    if (cost.cols() == 0) return a;
    if (cost.cols() > cost.rows()) return std::nullopt;
    const Eigen::MatrixXd ct = cost.transpose();
    Lsap solver(ct);
    auto sol = solver.solve();
    if (!sol) return std::nullopt;
    a.row_of_col = std::move(*sol);
    if (!std::isfinite(assignment_cost(cost, a.row_of_col))) return std::nullopt;
    lex_smallest(cost, a.row_of_col, solver.u(), solver.v());
    a.cost = assignment_cost(cost, a.row_of_col);
    return a;
}

struct MurtyNode {
    Assignment sol;
    std::vector<std::pair<int, int>> forced;     // (col, row)
    std::vector<std::pair<int, int>> forbidden;  // (col, row)
};

struct NodeOrder {
    bool operator()(const MurtyNode& a, const MurtyNode& b) const {
        if (a.sol.cost != b.sol.cost) return a.sol.cost > b.sol.cost;
        return a.sol.row_of_col > b.sol.row_of_col;
    }
};

std::optional<Assignment> solve_constrained(const Eigen::MatrixXd& cost, const std::vector<std::pair<int, int>>& forced,
                                            const std::vector<std::pair<int, int>>& forbidden) {
    Eigen::MatrixXd c = cost;
    for (const auto& [col, row] : forbidden) c(row, col) = kInf;
    for (const auto& [col, row] : forced) {
        const double keep = c(row, col);
        c.col(col).setConstant(kInf);
        c.row(row).setConstant(kInf);
        c(row, col) = keep;
    }
    auto a = solve_raw(c);
    if (a) a->cost = assignment_cost(cost, a->row_of_col);
    return a;
}

}  // namespace

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& row_of_col) {
    double s = 0.0;
    for (std::size_t c = 0; c < row_of_col.size(); ++c) s += cost(row_of_col[c], static_cast<Eigen::Index>(c));
    return s;
}

std::optional<Assignment> solve_assignment(const Eigen::MatrixXd& cost) { return solve_raw(cost); }

Assignment hungarian_best(const Eigen::MatrixXd& cost) {
    auto best = solve_raw(cost);
    if (!best) throw std::invalid_argument("assignment problem is infeasible");
    return *best;
}

std::vector<Assignment> murty_kbest(const Eigen::MatrixXd& cost, std::size_t M) {
    if (M < 1) throw std::invalid_argument("murty_kbest requires M >= 1");
    std::vector<Assignment> out;
    auto first = solve_raw(cost);
    if (!first) return out;
    std::priority_queue<MurtyNode, std::vector<MurtyNode>, NodeOrder> heap;
    heap.push(MurtyNode{std::move(*first), {}, {}});
    const int ncols = static_cast<int>(cost.cols());
    while (!heap.empty() && out.size() < M) {
        MurtyNode node = heap.top();
        heap.pop();
        out.push_back(node.sol);
        if (out.size() == M) break;
        std::vector<char> is_forced(static_cast<std::size_t>(ncols), 0);
        for (const auto& f : node.forced) is_forced[static_cast<std::size_t>(f.first)] = 1;
        auto forced = node.forced;
        for (int col = 0; col < ncols; ++col) {
            if (is_forced[static_cast<std::size_t>(col)]) continue;
            const int row = node.sol.row_of_col[static_cast<std::size_t>(col)];
            auto forbidden = node.forbidden;
            forbidden.emplace_back(col, row);
            if (auto sol = solve_constrained(cost, forced, forbidden)) {
                heap.push(MurtyNode{std::move(*sol), forced, std::move(forbidden)});
            }
            forced.emplace_back(col, row);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Assignment& a, const Assignment& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.row_of_col < b.row_of_col;
    });
    return out;
}

}  // namespace pmbm
