#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "adframes/config.hpp"
#include "adframes/constants.hpp"
#include "adframes/scenario.hpp"

using namespace adframes;

namespace {

const char* kGoodConfig = R"(
# oscillating qubit at the bundled study parameters
scenario.name = demo
model.name = oscillating_qubit_spin
model.omega0 = 1.0 MHz
model.omegaT = 0.02 MHz
model.a = 10.0
frame.generator = sz/2
frame.rate = drive
grid.tau = 100.0
initial.state = ket0
)";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("config: MHz suffix converts to rad/us") {
    auto cfg = ScenarioConfig::from_text(kGoodConfig);
    CHECK(cfg.omega0 == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(cfg.omegaT == doctest::Approx(0.02 * kTwoPi).epsilon(1e-15));
    CHECK(cfg.resolved_drive().value() == doctest::Approx(10.0 * kTwoPi).epsilon(1e-15));
    CHECK(cfg.has_frame);
    CHECK(cfg.frame_generator == "sz/2");
}

TEST_CASE("config: diagnostics name the field and collect every violation") {
    const char* broken = R"(
model.name = oscillating_qubit_spin
model.omegaT = 0.02 MHz
grid.t0 = 5.0
grid.tau = 1.0
initial.state = nonsense
typo.key = 1
)";
    auto issues = validate_config_text(broken);
    REQUIRE(issues.size() >= 4);
    auto contains = [&](const std::string& needle) {
        for (const auto& issue : issues)
            if (issue.find(needle) != std::string::npos) return true;
        return false;
    };
    CHECK(contains("model.omega0"));       // missing required key
    CHECK(contains("grid.tau"));           // range violation
    CHECK(contains("initial.state"));      // bad enum
    CHECK(contains("typo.key"));           // unknown key
}

TEST_CASE("config: resolution rule diagnostic suggests the minimum step count") {
    const char* coarse = R"(
model.name = oscillating_qubit_spin
model.omega0 = 1.0 MHz
model.omegaT = 0.02 MHz
model.a = 10.0
grid.tau = 100.0
grid.steps = 100
)";
    auto issues = validate_config_text(coarse);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("need at least 40001") != std::string::npos);

    // the explicit override silences it
    const std::string with_override = std::string(coarse) + "grid.override_resolution = true\n";
    CHECK(validate_config_text(with_override).empty());
}

TEST_CASE("config: duplicate and exclusive keys") {
    const char* dup = R"(
model.name = oscillating_qubit_spin
model.omega0 = 1.0 MHz
model.omega0 = 2.0 MHz
model.omegaT = 0.02 MHz
model.omega = 1.0 MHz
model.a = 2.0
grid.tau = 10.0
)";
    auto issues = validate_config_text(dup);
    auto contains = [&](const std::string& needle) {
        for (const auto& issue : issues)
            if (issue.find(needle) != std::string::npos) return true;
        return false;
    };
    CHECK(contains("duplicate key"));
    CHECK(contains("mutually exclusive"));
}

TEST_CASE("single-value sweep row matches the dedicated runners") {
    namespace fs = std::filesystem;
    const std::string dir = (fs::temp_directory_path() / "adframes_single_sweep").string();

    ScenarioConfig cfg = ScenarioConfig::from_text(kGoodConfig);
    cfg.output_dir = dir;
    cfg.sweep_values = {10.0};
    RunOptions opt;
    opt.exec = Exec::Serial;

    auto sweep = run_sweep(cfg, opt);
    REQUIRE(sweep.rows.size() == 1);
    const SweepRow& row = sweep.rows[0];

    auto sim = run_simulate(cfg, opt);
    CHECK(std::abs(row.fidelity_terminal -
                   sim.summary.at("terminal_fidelity").get<double>()) < 1e-14);
    CHECK(std::abs(row.fidelity_min - sim.summary.at("min_fidelity").get<double>()) < 1e-14);

    auto cond = run_conditions(cfg, opt);
    CHECK(std::abs(row.c_inertial[0] -
                   cond.summary.at("inertial").at("c1").get<double>()) < 1e-14);
    CHECK(std::abs(row.c_noninertial[0] -
                   cond.summary.at("noninertial").at("c1").get<double>()) < 1e-14);
}

TEST_CASE("sweep output is byte-identical across worker counts and runs") {
    namespace fs = std::filesystem;
    ScenarioConfig cfg = ScenarioConfig::from_text(kGoodConfig);
    cfg.sweep_values = {0.5, 2.0, 7.0};

    std::string csv_a, csv_b, json_a, json_b;
    {
        cfg.output_dir = (fs::temp_directory_path() / "adframes_det_a").string();
        RunOptions opt;
        opt.workers = 1;
        run_sweep(cfg, opt);
        csv_a = slurp(cfg.output_dir + "/demo_sweep.csv");
        json_a = slurp(cfg.output_dir + "/demo_sweep.json");
    }
    {
        cfg.output_dir = (fs::temp_directory_path() / "adframes_det_b").string();
        RunOptions opt;
        opt.workers = 4;
        run_sweep(cfg, opt);
        csv_b = slurp(cfg.output_dir + "/demo_sweep.csv");
        json_b = slurp(cfg.output_dir + "/demo_sweep.json");
    }
    CHECK(csv_a == csv_b);
    CHECK(json_a == json_b);
    CHECK(csv_a.find("a,fidelity_terminal") == 0);
}

TEST_CASE("emitted JSON summaries re-validate against the documented schemas") {
    namespace fs = std::filesystem;
    ScenarioConfig cfg = ScenarioConfig::from_text(kGoodConfig);
    cfg.output_dir = (fs::temp_directory_path() / "adframes_schema").string();
    RunOptions opt;

    auto sim = run_simulate(cfg, opt);
    CHECK_NOTHROW(validate_run_summary_json(
        Json::parse(slurp(cfg.output_dir + "/demo_summary.json"))));

    auto cond = run_conditions(cfg, opt);
    CHECK_NOTHROW(validate_condition_report_json(
        Json::parse(slurp(cfg.output_dir + "/demo_conditions_inertial.json"))));
    CHECK_NOTHROW(validate_condition_report_json(
        Json::parse(slurp(cfg.output_dir + "/demo_conditions_noninertial.json"))));

    auto t1 = run_theorem1(cfg, opt);
    CHECK_NOTHROW(validate_theorem_verdict_json(
        Json::parse(slurp(cfg.output_dir + "/demo_theorem1.json"))));
}

TEST_CASE("tabulated scenario runs end to end without a parametric drive") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "adframes_tab_run";
    fs::create_directories(dir);
    const std::string csv = (dir / "model.csv").string();
    {
        std::ofstream out(csv);
        out << "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11\n";
        const int n = 2001;
        for (int i = 0; i < n; ++i) {
            const double t = 10.0 * i / (n - 1);
            const double a = 1.0, b = 0.05 * std::sin(0.7 * t);
            out << t << ',' << a << ",0," << b << ",0," << b << ",0," << -a << ",0\n";
        }
    }
    ScenarioConfig cfg;
    cfg.name = "tab";
    cfg.model_name = "tabulated";
    cfg.tabulated_csv = csv;
    cfg.tau = 10.0;
    cfg.output_dir = (dir / "out").string();
    RunOptions opt;
    auto art = run_simulate(cfg, opt);
    CHECK(art.summary.at("terminal_fidelity").get<double>() > 0.99);

    // a tabulated sweep is rejected (the sweep parameter scales the drive)
    cfg.sweep_values = {1.0};
    CHECK_THROWS_AS(run_sweep(cfg, opt), ConfigError);
}

TEST_CASE("theorem2 runner needs a frame and a constant rotated Hamiltonian") {
    ScenarioConfig cfg = ScenarioConfig::from_text(kGoodConfig);
    cfg.output_dir = "/tmp/adframes_t2";
    CHECK_THROWS_AS(run_theorem2(cfg, RunOptions{}), std::domain_error);

    ScenarioConfig no_frame = cfg;
    no_frame.has_frame = false;
    CHECK_THROWS_AS(run_theorem1(no_frame, RunOptions{}), ConfigError);
}
