#pragma once

#include <span>
#include <vector>

#include "nstorus/majorant.hpp"
#include "nstorus/mild_solver.hpp"

namespace nstorus {

/// Per-checkpoint certificate data. analyticity_radius is the least-squares
/// slope of log amplitude against |k|_e over modes above the noise floor;
/// +infinity marks an underdetermined fit (fewer than two populated shells).
/// certified_radius = min(fit, nu t / 2), the strip the envelope actually
/// warrants; meets_reference compares the fit against the nu t / 4 strip.
struct CheckpointCertificate {
    double t = 0.0;
    double h1 = 0.0;
    double divergence_residual = 0.0;
    bool majorant_ok = false;
    double worst_ratio = 0.0;
    WaveVector worst_mode{0, 0, 0};
    double decay_ratio = 0.0;  // ||v(t)||_H1 e^{nu t/2} / ||v(0)||_H1
    double analyticity_radius = 0.0;
    double certified_radius = 0.0;
    bool meets_reference = false;
};

struct CertificationReport {
    std::vector<CheckpointCertificate> checkpoints;
    bool majorant_certified = false;  // every checkpoint dominated
    bool decay_certified = false;     // weighted norm never above cushion
    bool global_small_data = false;   // both of the above
    double decay_ratio = 0.0;         // sup_t ||v(t)||_H1 e^{nu t/2} / ||v(0)||_H1
    double slack = 0.0;
    double floor = 0.0;
    double decay_cushion = 0.0;
};

/// Checks the envelope domination and Fourier-decay claims checkpoint by
/// checkpoint. Trajectory and envelope must share one time grid.
CertificationReport certify(const VelocityTrajectory& traj, const MajorantTrajectory& env,
                            double slack = 1.0 + 1e-6, double decay_cushion = 1.01);

/// Norm-decay test alone: every zero-mean mode has |k|_e >= 1, so the linear
/// flow decays at least like e^{-nu t}; the check asks for half that rate
/// with a cushion, sup_t ||v(t)||_H1 e^{nu t/2} <= cushion * ||v(0)||_H1.
struct DecayCheck {
    bool ok = false;
    double max_ratio = 0.0;    // sup of the weighted ratio
    double final_ratio = 0.0;  // weighted ratio at the last checkpoint
    double worst_t = 0.0;
};
DecayCheck decay_check(const VelocityTrajectory& traj, double cushion = 1.01);

/// Amplitude sweep separating "the envelope method loses the solution" from
/// "the solution itself misbehaves". For each amplitude (ascending) the base
/// field is rescaled, the majorant blow-up horizon is bracketed, and the
/// mild solution is run to the last certified time to test that the H0 norm
/// never grows.
struct SingularProbeRow {
    double amplitude = 0.0;
    double initial_h1 = 0.0;
    BlowupBracket bracket;
    SolveStatus mild_status = SolveStatus::no_convergence;
    double mild_horizon = 0.0;
    double energy_growth = 0.0;  // sup_t ||v(t)||_H0 / ||v(0)||_H0
    bool energy_nonincreasing = false;
};

struct SingularProbeConfig {
    SolverConfig solver;       // horizon is overridden per row
    MajorantConfig majorant;
    double t_max = 1.0;
    double rel_width = 0.01;
};

struct SingularSetProbe {
    std::vector<SingularProbeRow> rows;
};

SingularSetProbe singular_set_probe(const SpectralVectorField& base,
                                    std::span<const double> amplitudes,
                                    const SingularProbeConfig& cfg);

}  // namespace nstorus
