#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "adframes/config.hpp"
#include "adframes/dynamics.hpp"
#include "adframes/report_io.hpp"

namespace adframes {

struct RunOptions {
    std::string out_dir;      // overrides the config output dir when nonempty
    int workers = 0;          // 0 = library default
    int steps_per_period = 0; // overrides grid.points_per_period when > 0
    bool override_resolution = false;
    Exec exec = Exec::Parallel;
};

struct RunArtifacts {
    std::vector<std::string> warnings;
    std::vector<std::string> files;
    Json summary;
};

/// Propagation + fidelity against the tracked adiabatic reference; adds a
/// dual-propagation frame-consistency figure when a frame is configured.
RunArtifacts run_simulate(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Coefficient reports (inertial, and rotated when a frame is configured).
RunArtifacts run_conditions(const ScenarioConfig& cfg, const RunOptions& opt = {});

RunArtifacts run_theorem1(const ScenarioConfig& cfg, const RunOptions& opt = {});
RunArtifacts run_theorem2(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// One sweep row; +inf sentinels mark coefficient pipelines that hit a
/// degeneracy and `note` carries the message. NaN marks a failed fidelity.
struct SweepRow {
    double a = 0.0;
    double fidelity_terminal = std::numeric_limits<double>::quiet_NaN();
    double fidelity_min = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 4> c_inertial{};
    std::array<double, 4> c_noninertial{};
    double t1_deviation = std::numeric_limits<double>::quiet_NaN();
    std::string t1_verdict;
    std::string note;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    RunArtifacts artifacts;
};

/// Full pipeline per sweep value; rows run concurrently and the output is
/// byte-identical for any worker count. Throws NumericalError only when
/// every row fails.
SweepOutcome run_sweep(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Bundled study recipes: fig2a, fig2b, fig2c, nmr.
RunArtifacts run_reproduce(const std::string& which, const RunOptions& opt = {});

// scenario building blocks, shared with the tests
HamiltonianModel build_model(const ScenarioConfig& cfg, double drive,
                             std::vector<std::string>* warnings = nullptr);
FrameSpec build_frame(const ScenarioConfig& cfg, double drive);
TimeGrid build_grid(const ScenarioConfig& cfg, double omega_max, const RunOptions& opt);
DensityMatrix initial_density(const ScenarioConfig& cfg, const HamiltonianModel& model);
std::vector<double> sweep_grid(const ScenarioConfig& cfg);

} // namespace adframes
