#pragma once

#include <filesystem>

#include "nstorus/certification.hpp"
#include "nstorus/run_config.hpp"

namespace nstorus {

/// Process exit codes shared by the CLI and the pipelines.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_solver_failure = 3;
inline constexpr int exit_certification_failure = 4;

SpectralVectorField build_initial(const RunConfig& cfg);
SolverConfig solver_config(const RunConfig& cfg);
MajorantConfig majorant_config(const RunConfig& cfg);

/// Output directory: config's [output] directory, prefixed by the
/// NSTORUS_OUTPUT_ROOT environment variable when set and the path is
/// relative.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

/// Full pipeline: initial data -> envelope solve -> mild solve -> aligned
/// certification, with all artifacts (CSV dumps, report, run_meta.json)
/// under out_dir. Returns exit_solver_failure when either fixed-point
/// iteration fails, exit_certification_failure when the certificate does
/// not hold.
int run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Amplitude sweep over [experiment] amplitudes: per amplitude, bracket the
/// envelope blow-up and run the mild solution over the certified window,
/// recording that certified horizons shrink monotonically and (when c_cal
/// is set) stay above the calibrated lower bound.
int sweep_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Smoothing-kernel probe over random pairs; fails (certification exit)
/// when a compensated ratio strays beyond the configured factor of its
/// median.
int probe_kernel_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Calibrates the horizon constant: smallest observed t_lo * (1+H1)^16 over
/// the amplitude list, nudged down for rounding safety.
int calibrate_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace nstorus
