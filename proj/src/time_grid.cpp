#include "nstorus/time_grid.hpp"

#include <stdexcept>

namespace nstorus {

std::vector<double> TimeGridSpec::build(double horizon) const {
    if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
    if (ratio < 1.0 || min_step_frac <= 0.0 || max_step_frac < min_step_frac)
        throw std::invalid_argument("invalid time grid spec");

    std::vector<double> grid{0.0};
    double step = min_step_frac * horizon;
    const double cap = max_step_frac * horizon;
    double t = 0.0;
    while (t < horizon) {
        t += step;
        if (t >= horizon - 0.25 * step) {
            grid.push_back(horizon);
            break;
        }
        grid.push_back(t);
        step = std::min(step * ratio, cap);
    }
    return grid;
}

TimeGrid refine_grid(const TimeGrid& grid) {
    TimeGrid fine;
    fine.reserve(2 * grid.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        fine.push_back(grid[i]);
        fine.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    fine.push_back(grid.back());
    return fine;
}

}  // namespace nstorus
