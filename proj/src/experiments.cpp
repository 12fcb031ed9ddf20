#include "nstorus/experiments.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include "json.hpp"
#include "nstorus/initial_conditions.hpp"
#include "nstorus/io.hpp"
#include "nstorus/operators.hpp"

namespace nstorus {

namespace {

using nlohmann::json;

json config_echo(const RunConfig& cfg) {
    json j;
    j["solver"] = {{"truncation", cfg.truncation},
                   {"nu", cfg.nu},
                   {"horizon", cfg.horizon},
                   {"picard_tol", cfg.picard_tol},
                   {"max_iterations", cfg.max_iterations},
                   {"convolution",
                    cfg.path == ConvolutionPath::padded_transform ? "padded" : "direct"}};
    j["grid"] = {{"ratio", cfg.grid.ratio},
                 {"min_step_frac", cfg.grid.min_step_frac},
                 {"max_step_frac", cfg.grid.max_step_frac}};
    j["initial"] = {{"kind", cfg.initial_kind}, {"amplitude", cfg.amplitude}, {"seed", cfg.seed}};
    j["majorant"] = {{"a", cfg.majorant_a},
                     {"tol", cfg.majorant_tol},
                     {"max_iterations", cfg.majorant_max_iterations}};
    j["certify"] = {{"slack", cfg.slack}, {"decay_cushion", cfg.decay_cushion}};
    return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

SpectralVectorField build_initial(const RunConfig& cfg) {
    if (cfg.truncation < 1) throw ConfigError("solver.truncation must be >= 1");
    if (cfg.initial_kind == "taylor_green") return taylor_green(cfg.amplitude, cfg.truncation);
    if (cfg.initial_kind == "shear") return shear_flow(cfg.amplitude, cfg.truncation);
    if (cfg.initial_kind == "random")
        return random_solenoidal(cfg.seed, cfg.amplitude, cfg.truncation);
    throw ConfigError("initial.kind: unknown initial condition '" + cfg.initial_kind + "'");
}

SolverConfig solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.truncation = cfg.truncation;
    sc.nu = cfg.nu;
    sc.horizon = cfg.horizon;
    sc.grid = cfg.grid;
    sc.picard_tol = cfg.picard_tol;
    sc.max_iterations = cfg.max_iterations;
    sc.path = cfg.path;
    return sc;
}

MajorantConfig majorant_config(const RunConfig& cfg) {
    MajorantConfig mc;
    mc.nu = cfg.nu;
    mc.a_const = cfg.majorant_a;
    mc.picard_tol = cfg.majorant_tol;
    mc.max_iterations = cfg.majorant_max_iterations;
    mc.path = cfg.path;
    return mc;
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
    std::filesystem::path dir = cfg.directory;
    if (const char* root = std::getenv("NSTORUS_OUTPUT_ROOT"); root && dir.is_relative())
        return std::filesystem::path(root) / dir;
    return dir;
}

int run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    SpectralVectorField initial = build_initial(cfg);
    const double initial_h1 = h1_norm(initial);
    io::write_vector_csv(out_dir / "initial.csv", initial);

    json meta;
    meta["config"] = config_echo(cfg);
    meta["initial_h1"] = initial_h1;
    if (cfg.c_cal > 0.0) {
        meta["certified_horizon"] = certified_horizon(cfg.c_cal, initial_h1);
        meta["c_cal"] = cfg.c_cal;
    }

    const TimeGrid grid = cfg.grid.build(cfg.horizon);
    meta["checkpoints"] = grid.size();

    auto env = solve_majorant(build_majorant(initial), grid, majorant_config(cfg));
    meta["majorant_status"] = to_string(env.status);
    meta["majorant_iterations"] = env.iterations;
    std::cout << "majorant: " << to_string(env.status) << " after " << env.iterations
              << " iterations\n";
    if (env.status != SolveStatus::converged) {
        write_json_file(out_dir / "run_meta.json", meta);
        return exit_solver_failure;
    }
    meta["majorant_sup_h1"] = sup_h1(env.trajectory);
    io::write_majorant_dump(out_dir / "majorant", env.trajectory);

    auto mild = solve_mild(initial, solver_config(cfg));
    meta["mild_status"] = to_string(mild.status);
    meta["mild_iterations"] = mild.iterations;
    std::cout << "mild: " << to_string(mild.status) << " after " << mild.iterations
              << " iterations\n";
    if (mild.status != SolveStatus::converged) {
        write_json_file(out_dir / "run_meta.json", meta);
        return exit_solver_failure;
    }
    meta["mild_sup_h1"] = sup_h1(mild.trajectory);
    io::write_trajectory(out_dir / "trajectory", mild.trajectory, cfg.frame_stride);

    auto report = certify(mild.trajectory, env.trajectory, cfg.slack, cfg.decay_cushion);
    io::write_report_json(out_dir / "report.json", report);
    io::write_report_text(out_dir / "report.txt", report);
    meta["majorant_certified"] = report.majorant_certified;
    meta["decay_certified"] = report.decay_certified;
    write_json_file(out_dir / "run_meta.json", meta);

    std::cout << io::report_summary(report);
    std::cout << "artifacts: " << out_dir.string() << "\n";
    return report.majorant_certified ? exit_ok : exit_certification_failure;
}

int sweep_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.amplitudes.empty())
        throw ConfigError("experiment.amplitudes is required for a sweep");
    std::filesystem::create_directories(out_dir);

    RunConfig base_cfg = cfg;
    base_cfg.amplitude = 1.0;
    SpectralVectorField base = build_initial(base_cfg);

    SingularProbeConfig probe_cfg;
    probe_cfg.solver = solver_config(cfg);
    probe_cfg.majorant = majorant_config(cfg);
    probe_cfg.t_max = cfg.t_max;
    probe_cfg.rel_width = cfg.rel_width;

    auto probe = singular_set_probe(base, cfg.amplitudes, probe_cfg);
    io::write_probe_json(out_dir / "probe.json", probe);

    bool monotone = true;
    for (std::size_t i = 1; i < probe.rows.size(); ++i)
        if (probe.rows[i].bracket.t_lo > probe.rows[i - 1].bracket.t_lo + 1e-12) monotone = false;

    json summary;
    summary["t_lo_nonincreasing"] = monotone;
    bool horizon_ok = true;
    if (cfg.c_cal > 0.0) {
        summary["c_cal"] = cfg.c_cal;
        json bounds = json::array();
        for (const auto& row : probe.rows) {
            double lower = certified_horizon(cfg.c_cal, row.initial_h1);
            double reached = row.bracket.unbounded ? cfg.t_max : row.bracket.t_lo;
            bounds.push_back({{"amplitude", row.amplitude},
                              {"horizon_lower_bound", lower},
                              {"certified_to", reached},
                              {"ok", reached >= lower}});
            horizon_ok = horizon_ok && reached >= lower;
        }
        summary["horizon_bounds"] = bounds;
        summary["horizon_bound_ok"] = horizon_ok;
    }
    write_json_file(out_dir / "sweep_summary.json", summary);

    for (const auto& row : probe.rows)
        std::cout << "amplitude " << io::format_double(row.amplitude) << ": certified to "
                  << io::format_double(row.bracket.t_lo)
                  << (row.bracket.unbounded ? " (no blow-up below t_max)" : "") << "\n";
    std::cout << "certified horizons nonincreasing: " << (monotone ? "yes" : "no") << "\n";
    return (monotone && horizon_ok) ? exit_ok : exit_certification_failure;
}

int probe_kernel_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    KernelProbeConfig probe_cfg;
    probe_cfg.truncation = cfg.truncation;
    probe_cfg.pair_count = cfg.probe_pairs;
    probe_cfg.time_count = cfg.probe_times;
    probe_cfg.seed = cfg.seed;
    probe_cfg.bound_factor = cfg.probe_bound_factor;

    auto probe = probe_smoothing_kernel(probe_cfg);
    auto window_json = [](const KernelProbeWindow& w) {
        return json{{"times", w.times},
                    {"ratio", w.ratio},
                    {"scaled", w.scaled},
                    {"scaled_max", w.scaled_max},
                    {"scaled_median", w.scaled_median},
                    {"bounded", w.bounded}};
    };
    json j;
    j["early"] = window_json(probe.early);
    j["tail"] = window_json(probe.tail);
    j["constant_estimate"] = probe.constant_estimate;
    write_json_file(out_dir / "kernel_probe.json", j);

    std::cout << "early window: max " << io::format_double(probe.early.scaled_max) << ", median "
              << io::format_double(probe.early.scaled_median)
              << (probe.early.bounded ? " (bounded)" : " (NOT bounded)") << "\n";
    std::cout << "tail window: max " << io::format_double(probe.tail.scaled_max) << ", median "
              << io::format_double(probe.tail.scaled_median)
              << (probe.tail.bounded ? " (bounded)" : " (NOT bounded)") << "\n";
    std::cout << "kernel constant estimate: " << io::format_double(probe.constant_estimate)
              << "\n";
    return (probe.early.bounded && probe.tail.bounded) ? exit_ok : exit_certification_failure;
}

int calibrate_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    if (cfg.amplitudes.empty())
        throw ConfigError("experiment.amplitudes is required for calibration");
    std::filesystem::create_directories(out_dir);

    RunConfig base_cfg = cfg;
    base_cfg.amplitude = 1.0;
    SpectralVectorField base = build_initial(base_cfg);

    json rows = json::array();
    double c_min = std::numeric_limits<double>::infinity();
    for (double amp : cfg.amplitudes) {
        SpectralVectorField scaled = amp * base;
        double h1 = h1_norm(scaled);
        auto bracket = blowup_bracket(build_majorant(scaled), majorant_config(cfg), cfg.grid,
                                      cfg.t_max, cfg.rel_width);
        double t_lo = bracket.unbounded ? cfg.t_max : bracket.t_lo;
        double c = t_lo * growth_factor16(h1);
        rows.push_back({{"amplitude", amp},
                        {"initial_h1", h1},
                        {"t_lo", t_lo},
                        {"unbounded", bracket.unbounded},
                        {"c", c}});
        c_min = std::min(c_min, c);
        std::cout << "amplitude " << io::format_double(amp) << ": t_lo "
                  << io::format_double(t_lo) << ", c " << io::format_double(c) << "\n";
    }

    // Nudge below the observed minimum so the round trip
    // certified_horizon(c_cal, h1) <= t_lo survives rounding.
    double c_cal = std::isfinite(c_min) ? (1.0 - 1e-9) * c_min : 0.0;
    json j;
    j["rows"] = rows;
    j["c_cal"] = c_cal;
    write_json_file(out_dir / "calibration.json", j);

    std::cout << "calibrated horizon constant: " << io::format_double(c_cal) << "\n";
    return c_cal > 0.0 ? exit_ok : exit_solver_failure;
}

}  // namespace nstorus
