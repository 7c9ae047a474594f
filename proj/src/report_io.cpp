#include "adframes/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace adframes {

std::string format_g17(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

Json coefficient_json(const Coefficient& c) {
    if (c.pole) return Json(); // null sentinel; pole time carried separately
    return Json(c.value);
}

void require_field(const Json& j, const char* name, const char* where) {
    if (!j.contains(name)) {
        throw ConfigError(std::string(where) + ": missing field '" + name + "'");
    }
}

void require_number(const Json& j, const char* name, const char* where,
                    bool allow_null = false) {
    require_field(j, name, where);
    if (allow_null && j.at(name).is_null()) return;
    if (!j.at(name).is_number()) {
        throw ConfigError(std::string(where) + ": field '" + name + "' must be a number");
    }
}

} // namespace

Json to_json(const ConditionReport& rep) {
    Json j;
    j["c1"] = coefficient_json(rep.c1);
    j["c2"] = coefficient_json(rep.c2);
    j["c3"] = coefficient_json(rep.c3);
    j["c4"] = coefficient_json(rep.c4);
    j["argmax_times"] = {{"c1", rep.c1.argmax_time},
                         {"c2", rep.c2.argmax_time},
                         {"c3", rep.c3.argmax_time},
                         {"c4", rep.c4.argmax_time}};
    if (rep.c3.pole) j["c3_pole_time_us"] = rep.c3.pole_time;
    j["frame"] = rep.frame;
    j["levels"] = {rep.levels.reference, rep.levels.other};
    return j;
}

Json to_json(const TheoremVerdict& v) {
    Json j;
    j["condition"] = v.condition;
    j["verdict"] = v.holds ? "holds" : "violated";
    j["max_deviation"] = v.max_deviation;
    j["tolerance"] = v.tolerance;
    j["witness"] = {{"t", v.witness_time}, {"index", v.witness_index}};
    j["per_index_deviation"] = v.per_index_deviation;
    return j;
}

Json to_json(const ClosedFormRecord& rec) {
    Json j;
    j["omega0"] = rec.omega0;
    j["omegaT"] = rec.omegaT;
    j["omega"] = rec.omega;
    j["t"] = rec.t;
    j["evaluable"] = rec.evaluable;
    if (!rec.note.empty()) j["note"] = rec.note;
    j["energies_numeric"] = {rec.energies_numeric[0], rec.energies_numeric[1]};
    Json vars = Json::array();
    for (const auto& v : rec.variants) {
        vars.push_back({{"theta_convention", v.theta_convention},
                        {"theta", v.theta},
                        {"sigma", v.sigma},
                        {"energies_printed", {v.energies_printed[0], v.energies_printed[1]}},
                        {"energy_deviation", {v.energy_deviation[0], v.energy_deviation[1]}},
                        {"state_overlap_deficit",
                         {v.state_overlap_deficit[0], v.state_overlap_deficit[1]}}});
    }
    j["variants"] = vars;
    return j;
}

Json to_json(const RotatedFormRecord& rec) {
    Json j;
    j["omega0"] = rec.omega0;
    j["omegaT"] = rec.omegaT;
    j["omega"] = rec.omega;
    j["note"] = rec.note;
    Json rows = Json::array();
    for (const auto& r : rec.rows) {
        rows.push_back({{"base_convention", r.base_convention},
                        {"frame_convention", r.frame_convention},
                        {"theta_convention", r.theta_convention},
                        {"max_deviation", r.max_deviation}});
    }
    j["rows"] = rows;
    return j;
}

void validate_condition_report_json(const Json& j) {
    const char* where = "condition report";
    require_number(j, "c1", where);
    require_number(j, "c2", where);
    require_number(j, "c3", where, /*allow_null=*/true);
    require_number(j, "c4", where);
    for (const char* name : {"c1", "c2", "c4"}) {
        if (j.at(name).get<double>() < 0.0)
            throw ConfigError(std::string(where) + ": field '" + name +
                              "' must be nonnegative");
    }
    if (j.at("c3").is_null()) {
        require_number(j, "c3_pole_time_us", where);
    }
    require_field(j, "argmax_times", where);
    for (const char* name : {"c1", "c2", "c3", "c4"}) {
        require_number(j.at("argmax_times"), name, "condition report argmax_times");
    }
    require_field(j, "frame", where);
    if (!j.at("frame").is_string())
        throw ConfigError(std::string(where) + ": field 'frame' must be a string");
    require_field(j, "levels", where);
    if (!j.at("levels").is_array() || j.at("levels").size() != 2)
        throw ConfigError(std::string(where) + ": field 'levels' must be a pair");
}

void validate_theorem_verdict_json(const Json& j) {
    const char* where = "theorem verdict";
    require_field(j, "condition", where);
    require_field(j, "verdict", where);
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict != "holds" && verdict != "violated")
        throw ConfigError(std::string(where) + ": verdict must be 'holds' or 'violated'");
    require_number(j, "max_deviation", where);
    require_number(j, "tolerance", where);
    require_field(j, "witness", where);
    require_number(j.at("witness"), "t", "theorem verdict witness");
    require_field(j.at("witness"), "index", "theorem verdict witness");
    const bool holds = verdict == "holds";
    if (holds != (j.at("max_deviation").get<double>() <= j.at("tolerance").get<double>()))
        throw ConfigError(std::string(where) +
                          ": verdict is inconsistent with max_deviation vs tolerance");
}

void validate_run_summary_json(const Json& j) {
    const char* where = "run summary";
    require_number(j, "terminal_fidelity", where);
    require_number(j, "min_fidelity", where);
    require_number(j, "unitarity_drift", where);
    for (const char* name : {"terminal_fidelity", "min_fidelity"}) {
        const double v = j.at(name).get<double>();
        if (v < 0.0 || v > 1.0 + 1e-9)
            throw ConfigError(std::string(where) + ": field '" + name +
                              "' outside [0, 1+1e-9]");
    }
}

void validate_sweep_summary_json(const Json& j) {
    const char* where = "sweep summary";
    require_field(j, "parameter", where);
    require_field(j, "rows", where);
    if (!j.at("rows").is_array() || j.at("rows").empty())
        throw ConfigError(std::string(where) + ": 'rows' must be a nonempty array");
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& row : j.at("rows")) {
        require_number(row, "a", "sweep row");
        const double a = row.at("a").get<double>();
        if (!(a > prev))
            throw ConfigError(std::string(where) + ": rows must be strictly ordered by 'a'");
        prev = a;
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << content;
    if (!out) throw ConfigError("failed writing output file " + path);
}

void write_condition_trace_csv(const std::string& path, const ConditionReport& rep,
                               const TimeGrid& grid) {
    std::string buf;
    buf.reserve(static_cast<std::size_t>(grid.steps) * 96 + 64);
    buf += "t,c1_integrand,c2_integrand,c3_integrand,c4_integrand\n";
    for (int i = 0; i < grid.steps; ++i) {
        buf += format_g17(grid.time(i));
        buf += ',';
        buf += format_g17(rep.c1.trace(i));
        buf += ',';
        buf += format_g17(rep.c2.trace(i));
        buf += ',';
        buf += format_g17(rep.c3.trace(i));
        buf += ',';
        buf += format_g17(rep.c4.trace(i));
        buf += '\n';
    }
    write_text_file(path, buf);
}

void write_fidelity_csv(const std::string& path, const PropagationResult& result,
                        const FidelityTrace& trace) {
    const int dim = static_cast<int>(result.states.front().dim());
    std::string buf;
    buf.reserve(static_cast<std::size_t>(result.grid.steps) * 96 + 64);
    buf += "t_us,fidelity,purity";
    for (int k = 0; k < dim; ++k) {
        buf += ",population_";
        buf += std::to_string(k);
    }
    buf += '\n';
    for (int i = 0; i < result.grid.steps; ++i) {
        buf += format_g17(result.grid.time(i));
        buf += ',';
        buf += format_g17(trace.values(i));
        buf += ',';
        buf += format_g17(result.states[i].purity());
        for (int k = 0; k < dim; ++k) {
            buf += ',';
            buf += format_g17(result.states[i].mat()(k, k).real());
        }
        buf += '\n';
    }
    write_text_file(path, buf);
}

void write_theorem_trace_csv(const std::string& path, const TheoremVerdict& v) {
    const int dim = static_cast<int>(v.deviation_trace.cols());
    std::string buf;
    buf += "t";
    for (int m = 0; m < dim; ++m) {
        buf += ",dev_";
        buf += std::to_string(m);
    }
    buf += '\n';
    for (int i = 0; i < v.deviation_trace.rows(); ++i) {
        buf += format_g17(v.grid.time(i));
        for (int m = 0; m < dim; ++m) {
            buf += ',';
            buf += format_g17(v.deviation_trace(i, m));
        }
        buf += '\n';
    }
    write_text_file(path, buf);
}

} // namespace adframes
