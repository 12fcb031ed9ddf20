#include "nstorus/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nstorus {

namespace {

// Least-squares slope of log amplitude against |k|_e; the radius is the
// negated slope. Modes at or below the floor are treated as numerically zero.
double radius_fit(const SpectralVectorField& v, double floor) {
    std::vector<double> xs, ys;
    const auto& ref = v.component(0);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        WaveVector k = ref.mode_at(i);
        if (k.is_zero()) continue;
        double amp = 0.0;
        for (int j = 0; j < 3; ++j) amp = std::max(amp, std::abs(v.component(j).data()[i]));
        if (amp <= floor) continue;
        xs.push_back(k.norm_e());
        ys.push_back(std::log(amp));
    }
    if (xs.size() < 2) return std::numeric_limits<double>::infinity();

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (xs[i] - mx) * (ys[i] - my);
        var += (xs[i] - mx) * (xs[i] - mx);
    }
    if (var == 0.0) return std::numeric_limits<double>::infinity();  // single shell
    return -cov / var;
}

}  // namespace

CertificationReport certify(const VelocityTrajectory& traj, const MajorantTrajectory& env,
                            double slack, double decay_cushion) {
    if (traj.grid.size() != env.grid.size() || traj.grid != env.grid)
        throw std::invalid_argument("certify: trajectory and envelope use different time grids");
    if (traj.frames.size() != traj.grid.size())
        throw std::invalid_argument("certify: frame count does not match the grid");
    if (!traj.frames.empty() && !env.frames.empty() &&
        traj.frames[0].truncation() != env.frames[0].truncation())
        throw std::invalid_argument("certify: trajectory and envelope truncations differ");
    if (!(slack >= 1.0)) throw std::invalid_argument("certify: slack must be >= 1");

    CertificationReport report;
    report.slack = slack;
    report.decay_cushion = decay_cushion;
    report.floor = 1e-13 * std::max(1.0, h1_norm(traj.frames[0]));

    const double initial_h1 = h1_norm(traj.frames[0]);
    report.majorant_certified = true;
    report.decay_ratio = 0.0;

    for (std::size_t j = 0; j < traj.frames.size(); ++j) {
        const auto& frame = traj.frames[j];
        const auto& envelope = env.frames[j];
        CheckpointCertificate cert;
        cert.t = traj.grid[j];
        cert.h1 = h1_norm(frame);
        cert.divergence_residual = frame.max_divergence();

        for (int comp = 0; comp < 3; ++comp)
            frame.component(comp).for_each_nonzero([&](const WaveVector& k, Complex c) {
                double bound =
                    slack * envelope.value(k) * std::exp(-env.nu * cert.t * k.norm_e() / 2.0) +
                    report.floor;
                double ratio = std::abs(c) / bound;
                if (ratio > cert.worst_ratio) {
                    cert.worst_ratio = ratio;
                    cert.worst_mode = k;
                }
            });
        cert.majorant_ok = cert.worst_ratio <= 1.0;

        cert.analyticity_radius = radius_fit(frame, report.floor);
        double heat_strip = env.nu * cert.t / 2.0;
        cert.certified_radius = std::min(cert.analyticity_radius, heat_strip);
        cert.meets_reference = cert.analyticity_radius >= env.nu * cert.t / 4.0;

        report.majorant_certified = report.majorant_certified && cert.majorant_ok;
        if (initial_h1 > 0.0) {
            cert.decay_ratio = cert.h1 * std::exp(traj.nu * cert.t / 2.0) / initial_h1;
            report.decay_ratio = std::max(report.decay_ratio, cert.decay_ratio);
        }
        report.checkpoints.push_back(cert);
    }

    report.decay_certified = report.decay_ratio <= decay_cushion;
    report.global_small_data = report.majorant_certified && report.decay_certified;
    return report;
}

DecayCheck decay_check(const VelocityTrajectory& traj, double cushion) {
    if (traj.frames.empty() || traj.frames.size() != traj.grid.size())
        throw std::invalid_argument("decay_check: empty or inconsistent trajectory");
    DecayCheck check;
    double initial = h1_norm(traj.frames[0]);
    if (initial == 0.0) {
        check.ok = true;
        return check;
    }
    for (std::size_t j = 0; j < traj.frames.size(); ++j) {
        double ratio = h1_norm(traj.frames[j]) * std::exp(traj.nu * traj.grid[j] / 2.0) / initial;
        if (ratio > check.max_ratio) {
            check.max_ratio = ratio;
            check.worst_t = traj.grid[j];
        }
        check.final_ratio = ratio;
    }
    check.ok = check.max_ratio <= cushion;
    return check;
}

SingularSetProbe singular_set_probe(const SpectralVectorField& base,
                                    std::span<const double> amplitudes,
                                    const SingularProbeConfig& cfg) {
    if (amplitudes.empty()) throw std::invalid_argument("singular_set_probe: no amplitudes");
    for (std::size_t i = 1; i < amplitudes.size(); ++i)
        if (!(amplitudes[i] > amplitudes[i - 1]))
            throw std::invalid_argument("singular_set_probe: amplitudes must be ascending");
    if (!(amplitudes.front() > 0.0))
        throw std::invalid_argument("singular_set_probe: amplitudes must be positive");

    SingularSetProbe probe;
    for (double amp : amplitudes) {
        SpectralVectorField scaled = amp * base;
        SingularProbeRow row;
        row.amplitude = amp;
        row.initial_h1 = h1_norm(scaled);
        row.bracket =
            blowup_bracket(build_majorant(scaled), cfg.majorant, cfg.solver.grid, cfg.t_max,
                           cfg.rel_width);

        double horizon = row.bracket.unbounded ? cfg.t_max : row.bracket.t_lo;
        if (horizon > 0.0) {
            SolverConfig solver = cfg.solver;
            solver.horizon = horizon;
            auto mild = solve_mild(scaled, solver);
            row.mild_status = mild.status;
            row.mild_horizon = horizon;
            double e0 = hs_norm(mild.trajectory.frames[0], 0.0);
            double sup = 0.0;
            for (const auto& frame : mild.trajectory.frames)
                sup = std::max(sup, hs_norm(frame, 0.0));
            row.energy_growth = e0 > 0.0 ? sup / e0 : 0.0;
            row.energy_nonincreasing = row.energy_growth <= 1.0 + 1e-9;
        }
        probe.rows.push_back(row);
    }
    return probe;
}

}  // namespace nstorus
