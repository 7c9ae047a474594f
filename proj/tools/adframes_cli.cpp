#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "adframes/scenario.hpp"

namespace {

using namespace adframes;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    int steps_per_period = 0;
    bool override_resolution = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_config = true) {
    if (with_config) {
        cmd->add_option("config", flags.config_path, "scenario config file")->required();
    }
    cmd->add_option("--out", flags.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--workers", flags.workers, "worker threads for parallel sections");
    cmd->add_option("--steps-per-period", flags.steps_per_period,
                    "grid points per fastest period (default 40)");
    cmd->add_flag("--override-resolution", flags.override_resolution,
                  "accept grids below the resolution rule");
}

RunOptions to_options(const CommonFlags& flags) {
    RunOptions opt;
    opt.out_dir = flags.out_dir;
    opt.workers = flags.workers;
    opt.steps_per_period = flags.steps_per_period;
    opt.override_resolution = flags.override_resolution;
    opt.exec = Exec::Parallel;
    return opt;
}

void report(const RunArtifacts& art) {
    for (const auto& w : art.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : art.files) std::cout << "wrote " << f << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven-qubit adiabaticity toolkit: exact propagation, adiabatic-condition "
                 "coefficients in inertial and rotated frames, frame-equivalence checks"};
    app.require_subcommand(1);

    CommonFlags simulate_flags, conditions_flags, t1_flags, t2_flags, sweep_flags,
        reproduce_flags;
    std::string reproduce_which, validate_path;

    auto* simulate = app.add_subcommand("simulate", "propagate and compute fidelity traces");
    add_common(simulate, simulate_flags);
    auto* conditions =
        app.add_subcommand("conditions", "compute C1..C4 coefficient reports");
    add_common(conditions, conditions_flags);
    auto* theorem1 = app.add_subcommand("theorem1", "overlap-invariance frame check");
    add_common(theorem1, t1_flags);
    auto* theorem2 = app.add_subcommand("theorem2", "constant-H_O frame check");
    add_common(theorem2, t2_flags);
    auto* sweep = app.add_subcommand("sweep", "full pipeline over a = omega/omega0 values");
    add_common(sweep, sweep_flags);
    auto* reproduce =
        app.add_subcommand("reproduce", "bundled study recipes: fig2a|fig2b|fig2c|nmr");
    reproduce->add_option("which", reproduce_which, "fig2a|fig2b|fig2c|nmr")->required();
    add_common(reproduce, reproduce_flags, /*with_config=*/false);
    auto* validate = app.add_subcommand("validate", "static config validation, no execution");
    validate->add_option("config", validate_path, "scenario config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*simulate) {
            report(run_simulate(ScenarioConfig::from_file(simulate_flags.config_path),
                                to_options(simulate_flags)));
        } else if (*conditions) {
            report(run_conditions(ScenarioConfig::from_file(conditions_flags.config_path),
                                  to_options(conditions_flags)));
        } else if (*theorem1) {
            report(run_theorem1(ScenarioConfig::from_file(t1_flags.config_path),
                                to_options(t1_flags)));
        } else if (*theorem2) {
            report(run_theorem2(ScenarioConfig::from_file(t2_flags.config_path),
                                to_options(t2_flags)));
        } else if (*sweep) {
            report(run_sweep(ScenarioConfig::from_file(sweep_flags.config_path),
                             to_options(sweep_flags))
                       .artifacts);
        } else if (*reproduce) {
            report(run_reproduce(reproduce_which, to_options(reproduce_flags)));
        } else if (*validate) {
            const auto issues = validate_config_file(validate_path);
            if (issues.empty()) {
                std::cout << "config ok\n";
            } else {
                for (const auto& issue : issues) std::cout << "issue: " << issue << "\n";
                return 2;
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
