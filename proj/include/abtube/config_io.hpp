#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "abtube/errors.hpp"
#include "abtube/run_config.hpp"

namespace abtube {

namespace detail {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& path) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw config_error(path + "." + key + ": " + e.what());
    }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out,
                   const std::string& path) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw config_error(path + "." + key + ": " + e.what());
    }
}

} // namespace detail

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["mode"] = to_string(cfg.mode);
    j["grid"] = {{"n_points", cfg.grid.n_points}, {"length", cfg.grid.length}};
    j["schedule"] = {{"t0", cfg.schedule.t0}, {"t1", cfg.schedule.t1},
                     {"t2", cfg.schedule.t2}, {"t3", cfg.schedule.t3},
                     {"v0", cfg.schedule.v0}};
    nlohmann::json charges = {{"q", cfg.charges.q},
                              {"m", cfg.charges.m},
                              {"m_induced", cfg.charges.m_induced},
                              {"coulomb_exponent", cfg.charges.coulomb_exponent}};
    if (cfg.charges.q_induced) charges["q_induced"] = *cfg.charges.q_induced;
    if (cfg.charges.detuning) charges["detuning"] = *cfg.charges.detuning;
    if (cfg.charges.softening) charges["softening"] = *cfg.charges.softening;
    j["charges"] = charges;
    j["confinement"] = {{"wall_center_low", cfg.confinement.wall_center_low},
                        {"wall_center_high", cfg.confinement.wall_center_high},
                        {"wall_height", cfg.confinement.wall_height},
                        {"wall_steepness", cfg.confinement.wall_steepness}};
    j["evolution"] = {{"dt", cfg.evolution.dt},
                      {"record_stride", cfg.evolution.record_stride}};
    j["moving_packet"] = {{"center", cfg.moving_packet.center},
                          {"width", cfg.moving_packet.width},
                          {"wavenumber", cfg.moving_packet.wavenumber}};
    j["induced_packet"] = {{"center", cfg.induced_packet.center},
                           {"width", cfg.induced_packet.width},
                           {"wavenumber", cfg.induced_packet.wavenumber}};
    j["fringe"] = {{"tilt", cfg.fringe.tilt}};
    j["external_on"] = cfg.external_on;
    j["sweep_v0"] = cfg.sweep_v0;
    j["output"] = {{"report_path", cfg.output.report_path},
                   {"fringe_path", cfg.output.fringe_path},
                   {"sweep_path", cfg.output.sweep_path}};
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    using detail::read_field;
    using detail::read_optional;
    RunConfig cfg;
    if (j.contains("mode")) cfg.mode = run_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        read_field(g, "n_points", cfg.grid.n_points, "grid");
        read_field(g, "length", cfg.grid.length, "grid");
    }
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        read_field(s, "t0", cfg.schedule.t0, "schedule");
        read_field(s, "t1", cfg.schedule.t1, "schedule");
        read_field(s, "t2", cfg.schedule.t2, "schedule");
        read_field(s, "t3", cfg.schedule.t3, "schedule");
        read_field(s, "v0", cfg.schedule.v0, "schedule");
    }
    if (j.contains("charges")) {
        const auto& c = j.at("charges");
        read_field(c, "q", cfg.charges.q, "charges");
        read_optional(c, "q_induced", cfg.charges.q_induced, "charges");
        read_optional(c, "detuning", cfg.charges.detuning, "charges");
        read_field(c, "m", cfg.charges.m, "charges");
        read_field(c, "m_induced", cfg.charges.m_induced, "charges");
        read_optional(c, "softening", cfg.charges.softening, "charges");
        read_field(c, "coulomb_exponent", cfg.charges.coulomb_exponent, "charges");
    }
    if (j.contains("confinement")) {
        const auto& c = j.at("confinement");
        read_field(c, "wall_center_low", cfg.confinement.wall_center_low, "confinement");
        read_field(c, "wall_center_high", cfg.confinement.wall_center_high, "confinement");
        read_field(c, "wall_height", cfg.confinement.wall_height, "confinement");
        read_field(c, "wall_steepness", cfg.confinement.wall_steepness, "confinement");
    }
    if (j.contains("evolution")) {
        const auto& e = j.at("evolution");
        read_field(e, "dt", cfg.evolution.dt, "evolution");
        read_field(e, "record_stride", cfg.evolution.record_stride, "evolution");
    }
    if (j.contains("moving_packet")) {
        const auto& p = j.at("moving_packet");
        read_field(p, "center", cfg.moving_packet.center, "moving_packet");
        read_field(p, "width", cfg.moving_packet.width, "moving_packet");
        read_field(p, "wavenumber", cfg.moving_packet.wavenumber, "moving_packet");
    }
    if (j.contains("induced_packet")) {
        const auto& p = j.at("induced_packet");
        read_field(p, "center", cfg.induced_packet.center, "induced_packet");
        read_field(p, "width", cfg.induced_packet.width, "induced_packet");
        read_field(p, "wavenumber", cfg.induced_packet.wavenumber, "induced_packet");
    }
    if (j.contains("fringe")) read_field(j.at("fringe"), "tilt", cfg.fringe.tilt, "fringe");
    read_field(j, "external_on", cfg.external_on, "config");
    read_field(j, "sweep_v0", cfg.sweep_v0, "config");
    if (j.contains("output")) {
        const auto& o = j.at("output");
        read_field(o, "report_path", cfg.output.report_path, "output");
        read_field(o, "fringe_path", cfg.output.fringe_path, "output");
        read_field(o, "sweep_path", cfg.output.sweep_path, "output");
    }
    return cfg;
}

/// Parse and fully validate a config file; throws config_error with every
/// violated constraint listed.
inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("malformed config " + path + ": " + e.what());
    }
    RunConfig cfg = config_from_json(j);
    validate_or_throw(cfg);
    return cfg;
}

inline void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write config file: " + path);
    out << config_to_json(cfg).dump(2) << "\n";
    if (!out) throw io_error("failed while writing config file: " + path);
}

} // namespace abtube
