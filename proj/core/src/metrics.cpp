#include "pmbm/metrics.hpp"

#include "pmbm/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmbm {

namespace {

bool present(const Trajectory& t, TimeStep from, TimeStep to) { return t.beta <= to && t.epsilon >= from; }

// Optimal assignment of the smaller set (columns) to the larger set (rows) of a distance
// matrix; returns the sum of assigned distances raised to p.
double assigned_cost(const Eigen::MatrixXd& dp) {
    if (dp.rows() == 0 || dp.cols() == 0) return 0.0;
    if (dp.cols() <= dp.rows()) return hungarian_best(dp).cost;
    return hungarian_best(Eigen::MatrixXd(dp.transpose())).cost;
}

}  // namespace

double trajectory_base_distance(const Trajectory& a, const Trajectory& b, TimeStep from, TimeStep to,
                                const Ospa2Params& prm) {
    double acc = 0.0;
    int steps = 0;
    for (TimeStep t = from; t <= to; ++t) {
        const bool ea = a.alive_at(t);
        const bool eb = b.alive_at(t);
        if (!ea && !eb) continue;
        double d = prm.c;
        if (ea && eb) {
            const double e = (a.state_at(t).head(prm.position_dims) - b.state_at(t).head(prm.position_dims)).norm();
            d = std::min(prm.c, e);
        }
        acc += std::pow(d, prm.q);
        ++steps;
    }
    if (steps == 0) return -1.0;
    return std::pow(acc / steps, 1.0 / prm.q);
}

MetricRow ospa2(const std::vector<Trajectory>& est, const std::vector<Trajectory>& truth, TimeStep k,
                const Ospa2Params& prm) {
    if (!(prm.c > 0.0) || prm.w < 1 || !(prm.p >= 1.0) || !(prm.q >= 1.0)) {
        throw std::invalid_argument("ospa2 needs c > 0, w >= 1, p >= 1, q >= 1");
    }
    const TimeStep from = std::max<TimeStep>(0, k - prm.w + 1);
    std::vector<const Trajectory*> X, Y;
    for (const auto& t : est) {
        if (present(t, from, k)) X.push_back(&t);
    }
    for (const auto& t : truth) {
        if (present(t, from, k)) Y.push_back(&t);
    }
    MetricRow row;
    row.k = k;
    const std::size_t n = X.size(), m = Y.size();
    const std::size_t big = std::max(n, m);
    if (big == 0) return row;
    Eigen::MatrixXd dp(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::pow(trajectory_base_distance(*Y[i], *X[j], from, k, prm), prm.p);
        }
    }
    const double loc_p = assigned_cost(dp);
    const double unassigned = static_cast<double>(big - std::min(n, m));
    const double card_p = std::pow(prm.c, prm.p) * unassigned;
    const double N = static_cast<double>(big);
    row.loc = std::pow(loc_p / N, 1.0 / prm.p);
    row.card = std::pow(card_p / N, 1.0 / prm.p);
    if (n < m) row.miss = row.card;
    else row.fa = row.card;
    row.total = std::pow((loc_p + card_p) / N, 1.0 / prm.p);
    return row;
}

MetricRow gospa_step(const std::vector<Eigen::VectorXd>& est, const std::vector<Eigen::VectorXd>& truth, TimeStep k,
                     double c, double p) {
    if (!(c > 0.0) || !(p >= 1.0)) throw std::invalid_argument("gospa needs c > 0 and p >= 1");
    MetricRow row;
    row.k = k;
    const std::size_t n = est.size(), m = truth.size();
    const std::size_t big = std::max(n, m);
    if (big == 0) return row;
    const double cp = std::pow(c, p);
    // each pair costs min(d, c)^p; a pair at distance >= c is equivalent to one miss plus one false
    Eigen::MatrixXd dp(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = (truth[i] - est[j]).norm();
            dp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::pow(std::min(d, c), p);
        }
    }
    double loc_p = 0.0;
    std::size_t paired = 0;
    if (n > 0 && m > 0) {
        const bool cols_are_est = n <= m;
        const Eigen::MatrixXd cost = cols_are_est ? dp : Eigen::MatrixXd(dp.transpose());
        const Assignment a = hungarian_best(cost);
        for (std::size_t col = 0; col < a.row_of_col.size(); ++col) {
            const double v = cost(a.row_of_col[col], static_cast<Eigen::Index>(col));
            if (v < cp) {
                loc_p += v;
                ++paired;
            }
        }
    }
    const double n_miss = static_cast<double>(m - paired);
    const double n_false = static_cast<double>(n - paired);
    const double N = static_cast<double>(big);
    row.loc = std::pow(loc_p / N, 1.0 / p);
    row.miss = std::pow(0.5 * cp * n_miss / N, 1.0 / p);
    row.fa = std::pow(0.5 * cp * n_false / N, 1.0 / p);
    row.card = std::pow(0.5 * cp * (n_miss + n_false) / N, 1.0 / p);
    row.total = std::pow((loc_p + 0.5 * cp * (n_miss + n_false)) / N, 1.0 / p);
    return row;
}

std::vector<Eigen::VectorXd> positions_at(const std::vector<Trajectory>& set, TimeStep k, int position_dims) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& t : set) {
        if (t.alive_at(k)) out.push_back(t.state_at(k).head(position_dims));
    }
    return out;
}

}  // namespace pmbm
