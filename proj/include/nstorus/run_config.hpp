#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nstorus/convolution.hpp"
#include "nstorus/time_grid.hpp"

namespace nstorus {

/// Raised for malformed config files or overrides; the CLI maps it to its
/// configuration exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Settings for one experiment, read from an INI-style file:
///   [section]
///   key = value        # comment
/// Sections: solver, grid, initial, majorant, certify, experiment, output.
/// Lists (experiment.amplitudes) are comma-separated. Unknown sections or
/// keys are errors, as are values that fail to parse.
struct RunConfig {
    // [solver]
    int truncation = 8;
    double nu = 1.0;
    double horizon = 0.5;
    double picard_tol = 1e-12;
    int max_iterations = 60;
    ConvolutionPath path = ConvolutionPath::padded_transform;

    // [grid]
    TimeGridSpec grid;

    // [initial]  kind: taylor_green | shear | random
    std::string initial_kind = "taylor_green";
    double amplitude = 1.0;  // target H1 norm for kind = random
    std::uint64_t seed = 20240801;

    // [majorant]
    double majorant_a = 2.0;
    double majorant_tol = 1e-12;
    int majorant_max_iterations = 80;

    // [certify]
    double slack = 1.0 + 1e-6;
    double decay_cushion = 1.01;

    // [experiment]
    std::vector<double> amplitudes;  // sweep / calibration points
    double t_max = 1.0;
    double rel_width = 0.01;
    double c_cal = 0.0;  // calibrated horizon constant; 0 = not set
    int probe_pairs = 100;
    int probe_times = 20;
    double probe_bound_factor = 3.0;

    // [output]
    std::string directory = "out";
    int frame_stride = 1;
};

RunConfig parse_config_file(const std::filesystem::path& path);

/// Applies one `section.key=value` override on top of a parsed config.
void apply_override(RunConfig& cfg, const std::string& assignment);

RunConfig load_config(const std::filesystem::path& path,
                      std::span<const std::string> overrides);

}  // namespace nstorus
