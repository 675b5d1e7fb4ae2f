#include "pmbm/set_integral.hpp"

#include <stdexcept>

namespace pmbm {

DiscreteTrajectorySpace::DiscreteTrajectorySpace(TimeWindow w, int cells) : window(w), num_cells(cells) {
    if (cells < 1) throw std::invalid_argument("discrete trajectory space needs at least one cell");
    for (TimeStep b = w.alpha; b <= w.gamma; ++b) {
        for (TimeStep e = b; e <= w.gamma; ++e) pairs.emplace_back(b, e);
    }
}

DiscreteTrajectorySpace::DiscreteTrajectorySpace(TimeWindow w, int cells,
                                                 std::vector<std::pair<TimeStep, TimeStep>> allowed)
    : window(w), num_cells(cells), pairs(std::move(allowed)) {
    if (cells < 1) throw std::invalid_argument("discrete trajectory space needs at least one cell");
    if (pairs.empty()) throw std::invalid_argument("discrete trajectory space needs at least one (beta, epsilon) pair");
    for (const auto& [b, e] : pairs) {
        if (b > e || !w.contains(b) || !w.contains(e)) {
            throw std::invalid_argument("(beta, epsilon) pair outside the window");
        }
    }
}

std::vector<DiscreteTrajectory> DiscreteTrajectorySpace::enumerate() const {
    std::vector<DiscreteTrajectory> out;
    for (const auto& [b, e] : pairs) {
        const auto len = static_cast<std::size_t>(e - b + 1);
        std::vector<int> cells(len, 0);
        for (;;) {
            out.push_back({b, e, cells});
            std::size_t i = 0;
            while (i < len && ++cells[i] == num_cells) cells[i++] = 0;
            if (i == len) break;
        }
    }
    return out;
}

double trajectory_set_integral(const SetDensityFn& f, int max_cardinality, const DiscreteTrajectorySpace& space) {
    if (max_cardinality < 0) throw std::invalid_argument("max_cardinality must be nonnegative");
    const auto singles = space.enumerate();
    if (singles.empty()) throw std::invalid_argument("empty trajectory grid");

    double total = f({});
    double inv_fact = 1.0;
    std::vector<DiscreteTrajectory> tuple;
    for (int n = 1; n <= max_cardinality; ++n) {
        inv_fact /= n;
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        double sum = 0.0;
        for (;;) {
            tuple.clear();
            for (auto i : idx) tuple.push_back(singles[i]);
            sum += f(tuple);
            std::size_t d = 0;
            while (d < idx.size() && ++idx[d] == singles.size()) idx[d++] = 0;
            if (d == idx.size()) break;
        }
        total += inv_fact * sum;
    }
    return total;
}

}  // namespace pmbm
