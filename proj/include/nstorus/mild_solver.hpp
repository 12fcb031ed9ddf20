#pragma once

#include <vector>

#include "nstorus/convolution.hpp"
#include "nstorus/solver_status.hpp"
#include "nstorus/spectral_field.hpp"
#include "nstorus/time_grid.hpp"

namespace nstorus {

struct SolverConfig {
    int truncation = 8;
    double nu = 1.0;
    double horizon = 0.5;
    TimeGridSpec grid;
    double picard_tol = 1e-12;     // relative sup-H1 increment threshold
    int max_iterations = 60;
    double sup_guard = 1e8;        // treat larger sup-H1 as divergence
    double divergence_tol = 1e-10; // input gate on the solenoidality residual
    ConvolutionPath path = ConvolutionPath::padded_transform;
};

struct VelocityTrajectory {
    TimeGrid grid;
    std::vector<SpectralVectorField> frames;  // one per grid point
    double nu = 1.0;
    int picard_iterations = 0;
    bool converged = false;
};

double sup_h1(const VelocityTrajectory& traj);

/// Picard iteration for the mild form
///   v(t) = S^{nu t} vhat + int_0^t S^{nu (t-xi)} N(v(xi)) dxi,
/// S the heat semigroup and N the projected quadratic term, with the
/// integrand piecewise linear on the grid. Initial data must carry the real
/// flag and pass the solenoidality gate; it is embedded into the configured
/// truncation if needed (throws when modes would be discarded).
struct MildSolveResult {
    VelocityTrajectory trajectory;
    SolveStatus status = SolveStatus::no_convergence;
    int iterations = 0;
    std::vector<double> increments;  // sup-H1 distance between successive iterates
};

MildSolveResult solve_mild(const SpectralVectorField& initial, const SolverConfig& cfg);

/// Classical fourth-order Runge-Kutta on the truncated Galerkin system
///   dv_k/dt = N_k(v) - nu |k|_e^2 v_k,
/// marching through every grid interval with substeps of at most max_step.
/// Serves as the independent cross-check for the Picard route; max_step must
/// not exceed min(1e-3, 0.1 / (nu N^2)) or the call throws.
struct OdeOracleConfig {
    double max_step = 1e-3;
    ConvolutionPath path = ConvolutionPath::padded_transform;
};

VelocityTrajectory galerkin_ode_oracle(const SpectralVectorField& initial, double nu,
                                       const TimeGrid& grid, const OdeOracleConfig& cfg);

/// sup over grid points of ||a(t) - b(t)||_H1; grids must match exactly.
double trajectory_distance(const VelocityTrajectory& a, const VelocityTrajectory& b);

/// Continuity at t = 0: distances ||v(t) - v(0)||_H1 at the checkpoints
/// below horizon/100 should shrink monotonically as t drops. Requires at
/// least three such checkpoints after t = 0 (throws otherwise).
struct InitialLayerReport {
    std::vector<double> times;      // ascending, excluding t = 0
    std::vector<double> distances;  // ||v(t_i) - v(0)||_H1
    bool monotone = false;          // strictly increasing with t
    double limit_distance = 0.0;    // distance at the earliest checkpoint
};

InitialLayerReport initial_layer_check(const VelocityTrajectory& traj);

}  // namespace nstorus
