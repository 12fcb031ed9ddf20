#pragma once

#include <cstddef>
#include <vector>

namespace nstorus {

/// Geometric-refinement time grid on [0, T]: the first step is
/// min_step_frac * T, successive steps grow by `ratio` up to
/// max_step_frac * T, and the last point is snapped to exactly T.
/// The refinement near t = 0 resolves the initial layer; the step cap keeps
/// the piecewise-linear quadrature accurate late in the interval.
struct TimeGridSpec {
    double ratio = 1.1;
    double min_step_frac = 1e-5;
    double max_step_frac = 1.0 / 400.0;

    std::vector<double> build(double horizon) const;
};

using TimeGrid = std::vector<double>;

/// Grid with every step halved (each interval split in two); used by the
/// refinement-stability checks.
TimeGrid refine_grid(const TimeGrid& grid);

}  // namespace nstorus
