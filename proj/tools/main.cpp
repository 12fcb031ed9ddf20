#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nstorus/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;  // optional override of [output] directory
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "Path to the experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", args.overrides,
                    "Override a config value as section.key=value (repeatable)");
    cmd->add_option("-o,--output", args.output_dir, "Output directory (overrides [output])");
}

int dispatch(const std::string& command, const CommonArgs& args) {
    nstorus::RunConfig cfg = nstorus::load_config(args.config_path, args.overrides);
    if (!args.output_dir.empty()) cfg.directory = args.output_dir;
    auto out_dir = nstorus::resolve_output_dir(cfg);

    if (command == "run") return nstorus::run_experiment(cfg, out_dir);
    if (command == "sweep") return nstorus::sweep_experiment(cfg, out_dir);
    if (command == "probe-kernel") return nstorus::probe_kernel_experiment(cfg, out_dir);
    if (command == "calibrate-c") return nstorus::calibrate_experiment(cfg, out_dir);
    return nstorus::exit_config_error;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral viscous-flow solver with certified mode envelopes"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, probe_args, cal_args;
    add_common(app.add_subcommand("run", "Solve one configuration and certify the result"),
               run_args);
    add_common(app.add_subcommand("sweep", "Amplitude sweep with blow-up bracketing"),
               sweep_args);
    add_common(app.add_subcommand("probe-kernel", "Empirical smoothing-kernel bound check"),
               probe_args);
    add_common(app.add_subcommand("calibrate-c", "Calibrate the existence-horizon constant"),
               cal_args);

    CLI11_PARSE(app, argc, argv);

    const CommonArgs* args = &run_args;
    std::string command = "run";
    if (app.got_subcommand("sweep")) {
        args = &sweep_args;
        command = "sweep";
    } else if (app.got_subcommand("probe-kernel")) {
        args = &probe_args;
        command = "probe-kernel";
    } else if (app.got_subcommand("calibrate-c")) {
        args = &cal_args;
        command = "calibrate-c";
    }

    try {
        return dispatch(command, *args);
    } catch (const nstorus::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return nstorus::exit_config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return nstorus::exit_solver_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
