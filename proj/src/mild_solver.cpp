#include "nstorus/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nstorus/operators.hpp"

namespace nstorus {

double sup_h1(const VelocityTrajectory& traj) {
    double sup = 0.0;
    for (const auto& frame : traj.frames) sup = std::max(sup, h1_norm(frame));
    return sup;
}

namespace {

void validate_grid(const TimeGrid& grid) {
    if (grid.empty()) throw std::invalid_argument("time grid is empty");
    if (grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
}

SpectralVectorField embed_initial(const SpectralVectorField& initial, int truncation) {
    if (initial.truncation() == truncation) return initial;
    if (initial.truncation() > truncation) {
        for (int j = 0; j < 3; ++j)
            initial.component(j).for_each_nonzero([&](const WaveVector& k, Complex) {
                if (k.norm_max() > truncation)
                    throw std::invalid_argument(
                        "solve_mild: initial data has modes beyond the configured truncation");
            });
    }
    return resize_truncation(initial, truncation);
}

}  // namespace

MildSolveResult solve_mild(const SpectralVectorField& initial, const SolverConfig& cfg) {
    if (cfg.truncation < 1) throw std::invalid_argument("solve_mild: truncation must be >= 1");
    if (!(cfg.nu > 0.0)) throw std::invalid_argument("solve_mild: viscosity must be positive");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("solve_mild: horizon must be positive");
    if (!(cfg.picard_tol > 0.0) || cfg.max_iterations < 1)
        throw std::invalid_argument("solve_mild: bad iteration controls");
    if (!initial.real_flagged())
        throw std::invalid_argument("solve_mild: initial data must be flagged real-valued");

    SpectralVectorField vhat = embed_initial(initial, cfg.truncation);
    const double scale = std::max(1.0, h1_norm(vhat));
    if (vhat.max_divergence() > cfg.divergence_tol * scale)
        throw std::invalid_argument("solve_mild: initial data is not solenoidal");
    vhat.set_solenoidal_checked(true);

    const TimeGrid grid = cfg.grid.build(cfg.horizon);
    const std::size_t frames_n = grid.size();
    const std::size_t intervals = frames_n - 1;
    const std::size_t modes = vhat.component(0).size();
    const int n = cfg.truncation;

    // Heat-kernel rates nu |k|_e^2 and the frozen quadrature tables.
    std::vector<double> rate(modes, 0.0);
    for (std::size_t m = 0; m < modes; ++m) {
        WaveVector k = vhat.component(0).mode_at(m);
        if (!k.is_zero()) rate[m] = cfg.nu * double(k.norm_e2());
    }
    std::vector<double> decay(modes * intervals), w_left(modes * intervals),
        w_right(modes * intervals);
    for (std::size_t m = 0; m < modes; ++m)
        for (std::size_t i = 0; i < intervals; ++i) {
            double h = grid[i + 1] - grid[i];
            auto w = exp_linear_weights(rate[m], h);
            decay[m * intervals + i] = std::exp(-rate[m] * h);
            w_left[m * intervals + i] = w.left;
            w_right[m * intervals + i] = w.right;
        }
    std::vector<double> heat(modes * frames_n);  // e^{-nu |k|^2 t_j}
    for (std::size_t j = 0; j < frames_n; ++j)
        for (std::size_t m = 0; m < modes; ++m)
            heat[j * modes + m] = std::exp(-rate[m] * grid[j]);

    MildSolveResult result;
    result.trajectory.grid = grid;
    result.trajectory.nu = cfg.nu;

    // Iterate 0: the heat flow of the data.
    auto& cur = result.trajectory.frames;
    cur.reserve(frames_n);
    for (std::size_t j = 0; j < frames_n; ++j) {
        SpectralVectorField frame(n);
        for (int comp = 0; comp < 3; ++comp) {
            auto dst = frame.component(comp).data();
            auto src = vhat.component(comp).data();
            for (std::size_t m = 0; m < modes; ++m) dst[m] = heat[j * modes + m] * src[m];
            frame.component(comp).set_real_flagged(true);
        }
        cur.push_back(std::move(frame));
    }

    Convolver conv(n, cfg.path);
    std::vector<Complex> integral(3 * modes);

    for (int it = 0; it < cfg.max_iterations; ++it) {
        double increment = 0.0, sup = h1_norm(cur[0]);
        std::fill(integral.begin(), integral.end(), Complex{});
        SpectralVectorField f_prev = nonlinear_term(cur[0], conv);

        for (std::size_t j = 1; j < frames_n; ++j) {
            SpectralVectorField f_cur = nonlinear_term(cur[j], conv);
            SpectralVectorField next(n);
            for (int comp = 0; comp < 3; ++comp) {
                auto dst = next.component(comp).data();
                auto src = vhat.component(comp).data();
                auto fl = f_prev.component(comp).data();
                auto fr = f_cur.component(comp).data();
                Complex* acc = integral.data() + std::size_t(comp) * modes;
                for (std::size_t m = 0; m < modes; ++m) {
                    std::size_t idx = m * intervals + (j - 1);
                    acc[m] = decay[idx] * acc[m] + w_left[idx] * fl[m] + w_right[idx] * fr[m];
                    dst[m] = heat[j * modes + m] * src[m] + acc[m];
                }
            }
            next = enforce_reality(next);
            increment = std::max(increment, h1_norm(next - cur[j]));
            sup = std::max(sup, h1_norm(next));
            cur[j] = std::move(next);
            f_prev = std::move(f_cur);
        }

        result.increments.push_back(increment);
        result.iterations = it + 1;

        if (!(sup < cfg.sup_guard) || !std::isfinite(sup)) {
            result.status = SolveStatus::non_contraction;
            break;
        }
        if (increment <= cfg.picard_tol * scale) {
            result.status = SolveStatus::converged;
            break;
        }
    }

    result.trajectory.picard_iterations = result.iterations;
    result.trajectory.converged = result.status == SolveStatus::converged;
    for (auto& frame : result.trajectory.frames) frame.set_solenoidal_checked(false);
    return result;
}

VelocityTrajectory galerkin_ode_oracle(const SpectralVectorField& initial, double nu,
                                       const TimeGrid& grid, const OdeOracleConfig& cfg) {
    validate_grid(grid);
    if (!(nu > 0.0)) throw std::invalid_argument("galerkin_ode_oracle: viscosity must be positive");
    const int n = initial.truncation();
    const double stability_cap = std::min(1e-3, 0.1 / (nu * double(n) * double(n)));
    if (!(cfg.max_step > 0.0) || cfg.max_step > stability_cap)
        throw std::invalid_argument("galerkin_ode_oracle: step exceeds the stability cap");

    Convolver conv(n, cfg.path);
    auto rhs = [&](const SpectralVectorField& v) {
        SpectralVectorField out = nonlinear_term(v, conv);
        for (int comp = 0; comp < 3; ++comp) {
            auto dst = out.component(comp).data();
            auto src = v.component(comp).data();
            for (std::size_t m = 0; m < dst.size(); ++m) {
                WaveVector k = v.component(comp).mode_at(m);
                dst[m] -= nu * double(k.norm_e2()) * src[m];
            }
        }
        return out;
    };

    VelocityTrajectory traj;
    traj.grid = grid;
    traj.nu = nu;
    traj.converged = true;
    traj.frames.reserve(grid.size());
    SpectralVectorField v = initial;
    traj.frames.push_back(v);

    for (std::size_t i = 1; i < grid.size(); ++i) {
        double h = grid[i] - grid[i - 1];
        auto substeps = std::size_t(std::ceil(h / cfg.max_step));
        double hs = h / double(substeps);
        for (std::size_t s = 0; s < substeps; ++s) {
            SpectralVectorField k1 = rhs(v);
            SpectralVectorField k2 = rhs(v + (0.5 * hs) * k1);
            SpectralVectorField k3 = rhs(v + (0.5 * hs) * k2);
            SpectralVectorField k4 = rhs(v + hs * k3);
            k2 += k3;
            k1 += k4;
            k1 += 2.0 * k2;  // k1 + 2k2 + 2k3 + k4
            v += (hs / 6.0) * k1;
        }
        v = enforce_reality(v);
        traj.frames.push_back(v);
    }
    return traj;
}

double trajectory_distance(const VelocityTrajectory& a, const VelocityTrajectory& b) {
    if (a.grid.size() != b.grid.size() || a.grid != b.grid)
        throw std::invalid_argument("trajectory_distance: time grids differ");
    double sup = 0.0;
    for (std::size_t j = 0; j < a.frames.size(); ++j)
        sup = std::max(sup, h1_norm(a.frames[j] - b.frames[j]));
    return sup;
}

InitialLayerReport initial_layer_check(const VelocityTrajectory& traj) {
    validate_grid(traj.grid);
    if (traj.frames.size() != traj.grid.size())
        throw std::invalid_argument("initial_layer_check: frame count does not match the grid");
    const double threshold = traj.grid.back() / 100.0;

    InitialLayerReport report;
    for (std::size_t j = 1; j < traj.grid.size(); ++j) {
        if (!(traj.grid[j] < threshold)) break;
        report.times.push_back(traj.grid[j]);
        report.distances.push_back(h1_norm(traj.frames[j] - traj.frames[0]));
    }
    if (report.times.size() < 3)
        throw std::invalid_argument(
            "initial_layer_check: need at least three checkpoints below horizon/100");

    report.monotone = true;
    for (std::size_t i = 1; i < report.distances.size(); ++i)
        if (!(report.distances[i] > report.distances[i - 1])) report.monotone = false;
    report.limit_distance = report.distances.front();
    return report;
}

}  // namespace nstorus
