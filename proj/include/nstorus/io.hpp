#pragma once

#include <filesystem>
#include <string>

#include "nstorus/certification.hpp"
#include "nstorus/majorant.hpp"
#include "nstorus/mild_solver.hpp"
#include "nstorus/spectral_field.hpp"

namespace nstorus::io {

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double value);

/// Scalar fields travel as `k1,k2,k3,re,im` rows, lexicographic in k with
/// exact-zero coefficients skipped. Vector fields prepend a 1-based
/// `component` column and order rows component-major. Readers infer the
/// truncation from the largest |k|_max present unless one is forced.
void write_scalar_csv(const std::filesystem::path& path, const SpectralScalarField& f);
SpectralScalarField read_scalar_csv(const std::filesystem::path& path, int truncation = 0);

void write_vector_csv(const std::filesystem::path& path, const SpectralVectorField& v);
SpectralVectorField read_vector_csv(const std::filesystem::path& path, int truncation = 0);

/// Envelope trajectories flatten to `t,k1,k2,k3,V` rows, frames in time
/// order; nu and the quadratic coefficient live in the companion manifest
/// when dumped via write_majorant_dump.
void write_majorant_csv(const std::filesystem::path& path, const MajorantTrajectory& traj);
MajorantTrajectory read_majorant_csv(const std::filesystem::path& path, int truncation = 0);

/// A velocity trajectory becomes a directory: one vector CSV per kept
/// checkpoint plus manifest.json recording nu, N, the grid, the iteration
/// count, the convergence flag and the per-checkpoint file names. stride
/// keeps every stride-th checkpoint (first and last always).
void write_trajectory(const std::filesystem::path& dir, const VelocityTrajectory& traj,
                      int stride = 1);
VelocityTrajectory read_trajectory(const std::filesystem::path& dir);

void write_majorant_dump(const std::filesystem::path& dir, const MajorantTrajectory& traj);

/// Certification output: machine-readable JSON plus a short text summary.
void write_report_json(const std::filesystem::path& path, const CertificationReport& report);
std::string report_summary(const CertificationReport& report);
void write_report_text(const std::filesystem::path& path, const CertificationReport& report);

void write_probe_json(const std::filesystem::path& path, const SingularSetProbe& probe);

}  // namespace nstorus::io
