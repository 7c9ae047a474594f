#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adframes/errors.hpp"

namespace adframes {

/// Parsed scenario description. The on-disk format is flat `key = value`
/// text with dotted section prefixes, one scenario per file; the grammar
/// lives in docs/config_format.md. Frequencies accept an `MHz` suffix
/// (converted to rad/us by 2*pi) and are raw rad/us otherwise.
struct ScenarioConfig {
    std::string name = "scenario";

    std::string model_name;
    double omega0 = 0.0;
    double omegaT = 0.0;
    double omegaRF = 0.0;
    std::optional<double> omega; // resolved drive, rad/us
    std::optional<double> a;     // drive as a multiple of omega0
    std::string tabulated_csv;

    bool has_frame = false;
    std::string frame_generator = "sz/2"; // "sz" or "sz/2"
    bool frame_rate_follows_drive = true;
    double frame_rate = 0.0;

    double t0 = 0.0;
    double tau = 0.0;
    std::optional<int> steps;
    int points_per_period = 40;
    bool override_resolution = false;

    std::string initial_state = "ket0"; // ket0|ket1|level0|level1
    std::optional<int> level_reference;
    std::optional<int> level_other;
    std::optional<int> theorem_level;
    double theorem_tolerance = 1e-3;

    std::vector<double> sweep_values;
    std::optional<double> sweep_log_min;
    std::optional<double> sweep_log_max;
    std::optional<int> sweep_log_points;

    std::string output_dir = "out";

    /// Drive frequency in rad/us, combining model.omega and model.a.
    std::optional<double> resolved_drive() const;

    static ScenarioConfig from_text(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);
};

/// Full static validation without execution; returns every violation,
/// each tagged with the offending key (and line where known).
std::vector<std::string> validate_config_text(const std::string& text);
std::vector<std::string> validate_config_file(const std::string& path);

} // namespace adframes
