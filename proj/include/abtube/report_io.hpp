#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "abtube/config_io.hpp"
#include "abtube/errors.hpp"
#include "abtube/scenarios.hpp"

namespace abtube {

/// Floating-point serialization for the CSV contract: 17 significant digits,
/// enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// The measurement block only: two runs with the same physics must produce
/// byte-identical strings here even if their config echoes differ.
inline nlohmann::json results_to_json(const SimulationReport& rep) {
    nlohmann::json r;
    r["measured_delta_phi"] = rep.measured_delta_phi;
    r["analytic_delta_phi"] = rep.analytic_delta_phi;
    r["delta_phi_error"] = rep.measured_delta_phi - rep.analytic_delta_phi;
    r["overlap_modulus"] = rep.overlap_modulus;
    r["deviation_sup"] = rep.deviation_sup;
    r["e1"] = rep.e1;
    r["e2"] = rep.e2;
    r["energy_gap"] = rep.e2 - rep.e1;
    r["energy_time"] = rep.energy_time;
    r["norm_drift"] = rep.norm_drift;
    r["fringe_shift_periods"] = rep.fringe_shift_periods;
    r["fringe_visibility_off"] = rep.fringe_visibility_off;
    r["fringe_visibility_on"] = rep.fringe_visibility_on;
    r["exterior_probability"] = rep.exterior_probability;
    r["steps"] = rep.steps;
    return r;
}

inline std::string results_signature(const SimulationReport& rep) {
    return results_to_json(rep).dump();
}

inline nlohmann::json report_to_json(const SimulationReport& rep,
                                     const AuditVerdict& verdict) {
    nlohmann::json j;
    j["config"] = config_to_json(rep.config);
    j["external_on"] = rep.external_on;
    j["results"] = results_to_json(rep);
    nlohmann::json checks = nlohmann::json::array();
    for (const AuditCheck& c : verdict.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"expected", c.expected},
                          {"tolerance", c.tolerance},
                          {"passed", c.passed}});
    j["audit"] = {{"passed", verdict.passed}, {"checks", checks}};
    j["notes"] = {rep.modeling_note};
    return j;
}

inline void write_report(const SimulationReport& rep, const AuditVerdict& verdict,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write report file: " + path);
    out << report_to_json(rep, verdict).dump(2) << "\n";
    if (!out) throw io_error("failed while writing report file: " + path);
}

inline void write_fringe_csv(const SimulationReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write fringe file: " + path);
    out << "x,intensity_off,intensity_on\n";
    for (std::size_t i = 0; i < rep.fringe_x.size(); ++i)
        out << format_double(rep.fringe_x[i]) << ','
            << format_double(rep.fringe_intensity_off[i]) << ','
            << format_double(rep.fringe_intensity_on[i]) << '\n';
    if (!out) throw io_error("failed while writing fringe file: " + path);
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write sweep file: " + path);
    out << "v0,delta_phi_measured,delta_phi_analytic,fringe_shift_periods\n";
    for (const SweepRow& r : rows)
        out << format_double(r.v0) << ',' << format_double(r.delta_phi_measured) << ','
            << format_double(r.delta_phi_analytic) << ','
            << format_double(r.fringe_shift_periods) << '\n';
    if (!out) throw io_error("failed while writing sweep file: " + path);
}

} // namespace abtube
