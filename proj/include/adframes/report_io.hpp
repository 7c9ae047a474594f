#pragma once

#include <string>

#include "json.hpp"

#include "adframes/conditions.hpp"
#include "adframes/dynamics.hpp"
#include "adframes/frames.hpp"
#include "adframes/spectral.hpp"

namespace adframes {

using Json = nlohmann::ordered_json;

/// Locale-independent shortest representation at 17 significant digits.
std::string format_g17(double v);

Json to_json(const ConditionReport& rep);
Json to_json(const TheoremVerdict& verdict);
Json to_json(const ClosedFormRecord& rec);
Json to_json(const RotatedFormRecord& rec);

/// Documented-schema validators; throw ConfigError naming the offending
/// field. Every summary the CLI writes is passed back through these.
void validate_condition_report_json(const Json& j);
void validate_theorem_verdict_json(const Json& j);
void validate_run_summary_json(const Json& j);
void validate_sweep_summary_json(const Json& j);

void write_text_file(const std::string& path, const std::string& content);

/// Columns: t, c1_integrand, c2_integrand, c3_integrand, c4_integrand.
void write_condition_trace_csv(const std::string& path, const ConditionReport& rep,
                               const TimeGrid& grid);

/// Columns: t_us, fidelity, purity, population_0, ... population_{dim-1}.
void write_fidelity_csv(const std::string& path, const PropagationResult& result,
                        const FidelityTrace& trace);

/// Columns: t, dev_0 ... dev_{dim-1}.
void write_theorem_trace_csv(const std::string& path, const TheoremVerdict& verdict);

} // namespace adframes
