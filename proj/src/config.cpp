#include "adframes/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "adframes/constants.hpp"
#include "adframes/spectral.hpp"

namespace adframes {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

struct RawConfig {
    std::map<std::string, Entry> kv;
    std::vector<std::string> syntax_issues;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "line " << line_no << ": expected 'key = value', got '" << line << "'";
            raw.syntax_issues.push_back(os.str());
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream os;
            os << "line " << line_no << ": empty key";
            raw.syntax_issues.push_back(os.str());
            continue;
        }
        if (raw.kv.count(key)) {
            std::ostringstream os;
            os << "line " << line_no << ": duplicate key '" << key << "' (first on line "
               << raw.kv[key].line << ")";
            raw.syntax_issues.push_back(os.str());
            continue;
        }
        raw.kv[key] = Entry{value, line_no};
    }
    return raw;
}

const std::set<std::string> kKnownKeys = {
    "scenario.name",   "model.name",          "model.omega0",
    "model.omegaT",    "model.omegaRF",       "model.omega",
    "model.a",         "model.csv",           "frame.generator",
    "frame.rate",      "grid.t0",             "grid.tau",
    "grid.steps",      "grid.points_per_period", "grid.override_resolution",
    "initial.state",   "levels.reference",    "levels.other",
    "theorem.level",   "theorem.tolerance",   "sweep.values",
    "sweep.log_min",   "sweep.log_max",       "sweep.log_points",
    "output.dir",
};

class Reader {
public:
    Reader(const RawConfig& raw) : raw_(raw) { issues_ = raw.syntax_issues; }

    bool has(const std::string& key) const { return raw_.kv.count(key) > 0; }

    std::string context(const std::string& key) const {
        std::ostringstream os;
        os << "key '" << key << "' (line " << raw_.kv.at(key).line << ")";
        return os.str();
    }

    std::optional<std::string> get_string(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return raw_.kv.at(key).value;
    }

    // plain number, or number with an MHz suffix when frequency = true
    std::optional<double> get_double(const std::string& key, bool frequency = false) {
        if (!has(key)) return std::nullopt;
        const std::string& v = raw_.kv.at(key).value;
        auto parsed = parse_value(v, frequency);
        if (!parsed) {
            issues_.push_back(context(key) + ": cannot parse " +
                              (frequency ? "frequency" : "number") + " from '" + v + "'");
            return std::nullopt;
        }
        if (!std::isfinite(*parsed)) {
            issues_.push_back(context(key) + ": value must be finite");
            return std::nullopt;
        }
        return parsed;
    }

    std::optional<int> get_int(const std::string& key) {
        auto d = get_double(key);
        if (!d) return std::nullopt;
        const int i = static_cast<int>(std::llround(*d));
        if (std::abs(*d - i) > 1e-9) {
            issues_.push_back(context(key) + ": expected an integer");
            return std::nullopt;
        }
        return i;
    }

    std::optional<bool> get_bool(const std::string& key) {
        auto s = get_string(key);
        if (!s) return std::nullopt;
        if (*s == "true") return true;
        if (*s == "false") return false;
        issues_.push_back(context(key) + ": expected 'true' or 'false', got '" + *s + "'");
        return std::nullopt;
    }

    std::optional<std::vector<double>> get_list(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const std::string& v = raw_.kv.at(key).value;
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto parsed = parse_value(trim(item), false);
            if (!parsed || !std::isfinite(*parsed)) {
                issues_.push_back(context(key) + ": cannot parse list item '" + trim(item) +
                                  "'");
                return std::nullopt;
            }
            out.push_back(*parsed);
        }
        if (out.empty()) {
            issues_.push_back(context(key) + ": empty list");
            return std::nullopt;
        }
        return out;
    }

    void check_unknown_keys() {
        for (const auto& [key, entry] : raw_.kv) {
            if (!kKnownKeys.count(key)) {
                std::ostringstream os;
                os << "unknown key '" << key << "' (line " << entry.line << ")";
                issues_.push_back(os.str());
            }
        }
    }

    void issue(const std::string& message) { issues_.push_back(message); }
    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::optional<double> parse_value(const std::string& token, bool frequency) {
        std::string body = token;
        bool mhz = false;
        if (frequency && body.size() > 3 && body.substr(body.size() - 3) == "MHz") {
            mhz = true;
            body = trim(body.substr(0, body.size() - 3));
        }
        double value = 0.0;
        const char* begin = body.data();
        const char* end = begin + body.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr != end) return std::nullopt;
        return mhz ? angular_from_mhz(value) : value;
    }

    const RawConfig& raw_;
    std::vector<std::string> issues_;
};

// Shared parse + validation. Fills cfg and returns every issue found.
std::vector<std::string> build(const std::string& text, ScenarioConfig& cfg) {
    RawConfig raw = parse_raw(text);
    Reader r(raw);
    r.check_unknown_keys();

    if (auto v = r.get_string("scenario.name")) cfg.name = *v;

    const std::set<std::string> known_models = {"oscillating_qubit", "oscillating_qubit_spin",
                                                "nmr_rotating", "tabulated"};
    if (auto v = r.get_string("model.name")) {
        cfg.model_name = *v;
        if (!known_models.count(*v))
            r.issue(r.context("model.name") + ": unknown model '" + *v + "'");
    } else {
        r.issue("missing required key 'model.name'");
    }

    const bool needs_frequencies = cfg.model_name != "tabulated";
    if (needs_frequencies) {
        if (auto v = r.get_double("model.omega0", true)) {
            cfg.omega0 = *v;
            if (cfg.omega0 == 0.0) r.issue(r.context("model.omega0") + ": must be nonzero");
        } else if (!r.has("model.omega0")) {
            r.issue("missing required key 'model.omega0'");
        }
        if (cfg.model_name == "nmr_rotating") {
            if (auto v = r.get_double("model.omegaRF", true)) cfg.omegaRF = *v;
            else if (!r.has("model.omegaRF"))
                r.issue("missing required key 'model.omegaRF' for nmr_rotating");
            if (r.has("model.omegaT"))
                r.issue(r.context("model.omegaT") + ": nmr_rotating uses model.omegaRF");
        } else if (!cfg.model_name.empty()) {
            if (auto v = r.get_double("model.omegaT", true)) cfg.omegaT = *v;
            else if (!r.has("model.omegaT"))
                r.issue("missing required key 'model.omegaT'");
            if (r.has("model.omegaRF"))
                r.issue(r.context("model.omegaRF") + ": only nmr_rotating uses model.omegaRF");
        }
    } else {
        if (auto v = r.get_string("model.csv")) cfg.tabulated_csv = *v;
        else r.issue("missing required key 'model.csv' for tabulated model");
    }

    if (auto v = r.get_double("model.omega", true)) cfg.omega = *v;
    if (auto v = r.get_double("model.a")) {
        cfg.a = *v;
        if (*v <= 0.0) r.issue(r.context("model.a") + ": must be > 0");
    }
    if (cfg.omega && cfg.a)
        r.issue("keys 'model.omega' and 'model.a' are mutually exclusive");
    if (cfg.model_name == "tabulated" && (cfg.omega || cfg.a))
        r.issue("tabulated models carry no parametric drive: drop model.omega / model.a");

    cfg.has_frame = r.has("frame.generator") || r.has("frame.rate");
    if (auto v = r.get_string("frame.generator")) {
        cfg.frame_generator = *v;
        if (*v != "sz" && *v != "sz/2")
            r.issue(r.context("frame.generator") + ": expected 'sz' or 'sz/2'");
    }
    if (auto v = r.get_string("frame.rate")) {
        if (*v == "drive") {
            cfg.frame_rate_follows_drive = true;
        } else {
            cfg.frame_rate_follows_drive = false;
            if (auto d = r.get_double("frame.rate", true)) cfg.frame_rate = *d;
        }
    }

    if (auto v = r.get_double("grid.t0")) cfg.t0 = *v;
    if (auto v = r.get_double("grid.tau")) cfg.tau = *v;
    else if (!r.has("grid.tau")) r.issue("missing required key 'grid.tau'");
    if (cfg.tau <= cfg.t0 && r.has("grid.tau"))
        r.issue("grid range invalid: grid.tau must exceed grid.t0");
    if (auto v = r.get_int("grid.steps")) {
        cfg.steps = *v;
        if (*v < 2) r.issue(r.context("grid.steps") + ": must be >= 2");
    }
    if (auto v = r.get_int("grid.points_per_period")) {
        cfg.points_per_period = *v;
        if (*v < 2) r.issue(r.context("grid.points_per_period") + ": must be >= 2");
    }
    if (auto v = r.get_bool("grid.override_resolution")) cfg.override_resolution = *v;

    if (auto v = r.get_string("initial.state")) {
        cfg.initial_state = *v;
        const std::set<std::string> allowed = {"ket0", "ket1", "level0", "level1"};
        if (!allowed.count(*v))
            r.issue(r.context("initial.state") +
                    ": expected one of ket0|ket1|level0|level1");
    }
    if (r.has("levels.reference")) cfg.level_reference = r.get_int("levels.reference");
    if (r.has("levels.other")) cfg.level_other = r.get_int("levels.other");
    if (r.has("theorem.level")) cfg.theorem_level = r.get_int("theorem.level");
    if (auto v = r.get_double("theorem.tolerance")) {
        cfg.theorem_tolerance = *v;
        if (*v <= 0.0) r.issue(r.context("theorem.tolerance") + ": must be > 0");
    }

    if (auto v = r.get_list("sweep.values")) {
        cfg.sweep_values = *v;
        std::set<double> uniq(v->begin(), v->end());
        if (uniq.size() != v->size())
            r.issue(r.context("sweep.values") + ": values must be distinct");
        for (double a : *v)
            if (a <= 0.0) {
                r.issue(r.context("sweep.values") + ": sweep values must be > 0");
                break;
            }
    }
    if (auto v = r.get_double("sweep.log_min")) cfg.sweep_log_min = *v;
    if (auto v = r.get_double("sweep.log_max")) cfg.sweep_log_max = *v;
    if (auto v = r.get_int("sweep.log_points")) cfg.sweep_log_points = *v;
    const int nlog = int(bool(cfg.sweep_log_min)) + int(bool(cfg.sweep_log_max)) +
                     int(bool(cfg.sweep_log_points));
    if (nlog != 0 && nlog != 3) {
        r.issue("log sweep needs all of sweep.log_min, sweep.log_max, sweep.log_points");
    } else if (nlog == 3) {
        if (!(*cfg.sweep_log_min > 0.0) || !(*cfg.sweep_log_max > *cfg.sweep_log_min))
            r.issue("log sweep range invalid: need 0 < log_min < log_max");
        if (*cfg.sweep_log_points < 2) r.issue("sweep.log_points must be >= 2");
    }

    if (auto v = r.get_string("output.dir")) cfg.output_dir = *v;

    // resolution rule, checked statically when the drive is known
    if (cfg.steps && !cfg.override_resolution && needs_frequencies && cfg.omega0 != 0.0 &&
        cfg.tau > cfg.t0) {
        const auto drive = cfg.resolved_drive();
        if (drive) {
            double spread;
            if (cfg.model_name == "oscillating_qubit") {
                spread = 2.0 * std::sqrt(cfg.omega0 * cfg.omega0 + cfg.omegaT * cfg.omegaT);
            } else if (cfg.model_name == "oscillating_qubit_spin") {
                spread = std::sqrt(cfg.omega0 * cfg.omega0 + cfg.omegaT * cfg.omegaT);
            } else {
                spread = std::sqrt(cfg.omega0 * cfg.omega0 + cfg.omegaRF * cfg.omegaRF);
            }
            double omega_max = std::max(spread, std::abs(*drive));
            if (cfg.has_frame) {
                const double rate =
                    cfg.frame_rate_follows_drive ? *drive : cfg.frame_rate;
                omega_max += std::abs(rate) * (cfg.frame_generator == "sz" ? 2.0 : 1.0);
            }
            const int need =
                required_steps(cfg.t0, cfg.tau, omega_max, cfg.points_per_period);
            if (*cfg.steps < need) {
                std::ostringstream os;
                os << "grid.steps = " << *cfg.steps << " breaks the resolution rule ("
                   << cfg.points_per_period << " points per fastest period, omega_max = "
                   << omega_max << " rad/us): need at least " << need
                   << " steps, or set grid.override_resolution = true";
                r.issue(os.str());
            }
        }
    }

    return r.issues();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::optional<double> ScenarioConfig::resolved_drive() const {
    if (omega) return omega;
    if (a) return *a * omega0;
    return std::nullopt;
}

ScenarioConfig ScenarioConfig::from_text(const std::string& text) {
    ScenarioConfig cfg;
    const auto issues = build(text, cfg);
    if (!issues.empty()) {
        std::ostringstream os;
        os << "invalid configuration (" << issues.size() << " issue"
           << (issues.size() == 1 ? "" : "s") << "):";
        for (const auto& issue : issues) os << "\n  - " << issue;
        throw ConfigError(os.str());
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    return from_text(read_file(path));
}

std::vector<std::string> validate_config_text(const std::string& text) {
    ScenarioConfig cfg;
    return build(text, cfg);
}

std::vector<std::string> validate_config_file(const std::string& path) {
    return validate_config_text(read_file(path));
}

} // namespace adframes
