#pragma once

#include <bit>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "abtube/errors.hpp"
#include "abtube/grid.hpp"
#include "abtube/potentials.hpp"

namespace abtube {

enum class RunMode { single_particle, two_particle };

inline std::string to_string(RunMode m) {
    return m == RunMode::single_particle ? "single_particle" : "two_particle";
}

inline RunMode run_mode_from_string(const std::string& s) {
    if (s == "single_particle") return RunMode::single_particle;
    if (s == "two_particle") return RunMode::two_particle;
    throw config_error("mode: expected single_particle or two_particle, got '" + s + "'");
}

struct GridSection {
    int n_points = 1024;
    double length = 100.0;
    bool operator==(const GridSection&) const = default;
};

struct ChargesSection {
    double q = 1.0;
    std::optional<double> q_induced; // defaults to -q
    std::optional<double> detuning;  // epsilon: q_induced = -q (1 - epsilon)
    double m = 1.0;
    double m_induced = 1.0;
    std::optional<double> softening; // defaults to 10 * grid spacing
    int coulomb_exponent = 1;
    bool operator==(const ChargesSection&) const = default;
};

struct ConfinementSection {
    double wall_center_low = -6.0;
    double wall_center_high = 6.0;
    double wall_height = 40.0;
    double wall_steepness = 0.4;
    bool operator==(const ConfinementSection&) const = default;
};

struct EvolutionSection {
    double dt = 0.01;
    int record_stride = 10;
    bool operator==(const EvolutionSection&) const = default;
};

struct PacketSection {
    double center = 0.0;
    double width = 1.0;
    double wavenumber = 0.0;
    bool operator==(const PacketSection&) const = default;
};

struct FringeSection {
    double tilt = 1.0; // fringe wavenumber kappa at the recombination plane
    bool operator==(const FringeSection&) const = default;
};

struct OutputSection {
    std::string report_path = "report.json";
    std::string fringe_path = "fringes.csv";
    std::string sweep_path = "sweep.csv";
    bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
    RunMode mode = RunMode::single_particle;
    GridSection grid;
    PulseSchedule schedule{0.0, 2.0, 6.0, 8.0, 0.0};
    ChargesSection charges;
    ConfinementSection confinement;
    EvolutionSection evolution;
    PacketSection moving_packet;
    PacketSection induced_packet;
    FringeSection fringe;
    bool external_on = true;
    std::vector<double> sweep_v0;
    OutputSection output;

    bool operator==(const RunConfig&) const = default;

    int dims() const { return mode == RunMode::two_particle ? 2 : 1; }
    double spacing() const { return grid.length / grid.n_points; }

    /// Resolved charge configuration (detuning applied, defaults filled).
    ChargeConfig charge_config() const {
        ChargeConfig c;
        c.q = charges.q;
        c.m = charges.m;
        c.m_induced = charges.m_induced;
        c.softening = charges.softening.value_or(10.0 * spacing());
        c.coulomb_exponent = charges.coulomb_exponent;
        if (charges.detuning) {
            c.detuned = true;
            c.q_induced = -charges.q * (1.0 - *charges.detuning);
        } else {
            c.detuned = false;
            c.q_induced = charges.q_induced.value_or(-charges.q);
        }
        return c;
    }

    ConfinementSpec confinement_spec() const {
        return ConfinementSpec{confinement.wall_center_low, confinement.wall_center_high,
                               confinement.wall_height, confinement.wall_steepness};
    }
};

namespace detail {

inline bool is_integer_multiple(double span, double dt) {
    const double ratio = span / dt;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, std::abs(ratio));
}

inline void check_packet(std::vector<std::string>& errs, const std::string& path,
                         const PacketSection& p, double spacing, double half_length) {
    if (!(p.width > 0.0)) {
        errs.push_back(path + ".width: must be positive");
        return;
    }
    if (p.width < 4.0 * spacing)
        errs.push_back(path + ".width: " + std::to_string(p.width) +
                       " below resolvable minimum 4 * spacing = " +
                       std::to_string(4.0 * spacing));
    const double d_min = std::min(p.center + half_length, half_length - p.center);
    if (d_min <= 0.0 || std::exp(-d_min * d_min / (4.0 * p.width * p.width)) > 1e-10)
        errs.push_back(path + ": boundary tail above 1e-10 of the peak; widen the "
                       "domain or narrow the packet");
}

} // namespace detail

/// Every constraint the modules will enforce later, reported up front with
/// field paths. Empty result means the config is runnable.
inline std::vector<std::string> validate(const RunConfig& cfg) {
    std::vector<std::string> errs;

    if (cfg.grid.n_points < 64 ||
        !std::has_single_bit(static_cast<unsigned>(cfg.grid.n_points)))
        errs.push_back("grid.n_points: power of two >= 64 required, got " +
                       std::to_string(cfg.grid.n_points));
    if (!(cfg.grid.length > 0.0)) errs.push_back("grid.length: must be positive");

    const PulseSchedule& s = cfg.schedule;
    if (!s.ordered())
        errs.push_back("schedule: times must satisfy t0 < t1 < t2 < t3");

    if (!(cfg.evolution.dt > 0.0)) errs.push_back("evolution.dt: must be positive");
    if (cfg.evolution.record_stride < 1)
        errs.push_back("evolution.record_stride: must be >= 1");
    if (s.ordered() && cfg.evolution.dt > 0.0) {
        if (!detail::is_integer_multiple(s.t1 - s.t0, cfg.evolution.dt))
            errs.push_back("schedule.t1: switch must align to the time grid "
                           "((t1 - t0) / dt integral)");
        if (!detail::is_integer_multiple(s.t2 - s.t0, cfg.evolution.dt))
            errs.push_back("schedule.t2: switch must align to the time grid "
                           "((t2 - t0) / dt integral)");
        if (!detail::is_integer_multiple(s.t3 - s.t0, cfg.evolution.dt))
            errs.push_back("schedule.t3: span must be a whole number of steps");
    }

    if (cfg.charges.q_induced && cfg.charges.detuning)
        errs.push_back("charges: q_induced and detuning are mutually exclusive");
    if (cfg.charges.detuning && std::abs(*cfg.charges.detuning) > 0.1)
        errs.push_back("charges.detuning: |epsilon| must be <= 0.1");
    if (cfg.charges.q_induced && *cfg.charges.q_induced != -cfg.charges.q)
        errs.push_back("charges.q_induced: physical mode requires q_induced == -q "
                       "(use charges.detuning for offsets)");
    if (!(cfg.charges.m > 0.0)) errs.push_back("charges.m: must be positive");
    if (!(cfg.charges.m_induced > 0.0))
        errs.push_back("charges.m_induced: must be positive");
    if (cfg.charges.softening && !(*cfg.charges.softening > 0.0))
        errs.push_back("charges.softening: must be positive");
    if (cfg.charges.coulomb_exponent != 1 && cfg.charges.coulomb_exponent != 2)
        errs.push_back("charges.coulomb_exponent: must be 1 or 2");

    const double spacing = cfg.grid.n_points > 0 ? cfg.spacing() : 0.0;
    const double half = 0.5 * cfg.grid.length;
    if (spacing > 0.0)
        detail::check_packet(errs, "moving_packet", cfg.moving_packet, spacing, half);

    if (cfg.mode == RunMode::two_particle && spacing > 0.0) {
        const ConfinementSection& c = cfg.confinement;
        if (!(c.wall_center_low < c.wall_center_high))
            errs.push_back("confinement: wall_center_low must be below wall_center_high");
        if (!(c.wall_height > 0.0)) errs.push_back("confinement.wall_height: must be positive");
        if (!(c.wall_steepness > 0.0))
            errs.push_back("confinement.wall_steepness: must be positive");
        if (c.wall_center_low <= -0.75 * half || c.wall_center_high >= 0.75 * half)
            errs.push_back("confinement: walls must sit inside the central "
                           "three-quarters of the domain (the outer band is the "
                           "leak monitor region)");
        detail::check_packet(errs, "induced_packet", cfg.induced_packet, spacing, half);
        if (cfg.induced_packet.center <= c.wall_center_low ||
            cfg.induced_packet.center >= c.wall_center_high)
            errs.push_back("induced_packet.center: must lie between the confinement walls");
        if (cfg.induced_packet.width > 0.0 && cfg.charges.m_induced > 0.0 &&
            c.wall_height > 0.0) {
            // Effective confinement: walls at least 100x the induced packet's
            // characteristic kinetic energy.
            const double sigma = cfg.induced_packet.width;
            const double k0 = cfg.induced_packet.wavenumber;
            const double char_ke = 1.0 / (8.0 * cfg.charges.m_induced * sigma * sigma) +
                                   k0 * k0 / (2.0 * cfg.charges.m_induced);
            if (c.wall_height < 100.0 * char_ke)
                errs.push_back("confinement.wall_height: must be >= 100x the induced "
                               "packet's kinetic energy (" + std::to_string(100.0 * char_ke) +
                               ")");
        }
    }

    // Per-step overlap-phase increment must stay below pi or the unwrapped
    // phase track becomes ambiguous.
    if (cfg.evolution.dt > 0.0) {
        const double rate = cfg.mode == RunMode::single_particle
                                ? std::abs(cfg.charges.q)
                                : std::abs(cfg.charges.q + cfg.charge_config().q_induced);
        double v_max = std::abs(cfg.schedule.v0);
        for (double v : cfg.sweep_v0) v_max = std::max(v_max, std::abs(v));
        if (rate * v_max * cfg.evolution.dt >= std::numbers::pi)
            errs.push_back("evolution.dt: |q_eff * v0 * dt| must stay below pi for "
                           "unambiguous phase tracking; reduce dt or v0");
    }

    if (cfg.fringe.tilt == 0.0)
        errs.push_back("fringe.tilt: must be nonzero (degenerate fringe)");

    return errs;
}

inline void validate_or_throw(const RunConfig& cfg) {
    const std::vector<std::string> errs = validate(cfg);
    if (errs.empty()) return;
    std::ostringstream msg;
    msg << "invalid configuration (" << errs.size() << " violation"
        << (errs.size() == 1 ? "" : "s") << "):";
    for (const std::string& e : errs) msg << "\n  - " << e;
    throw config_error(msg.str());
}

/// Ready-to-run defaults; also what `emit-example-config` prints.
inline RunConfig example_config(RunMode mode) {
    RunConfig cfg;
    cfg.mode = mode;
    if (mode == RunMode::single_particle) {
        cfg.grid = GridSection{1024, 100.0};
        cfg.schedule = PulseSchedule{0.0, 2.0, 6.0, 8.0, std::numbers::pi / 4.0};
        cfg.evolution = EvolutionSection{0.01, 10};
        cfg.moving_packet = PacketSection{-20.0, 2.5, 2.0};
        cfg.fringe.tilt = 2.0 * std::numbers::pi * 32.0 / cfg.grid.length;
        cfg.sweep_v0 = {0.0, std::numbers::pi / 8.0, std::numbers::pi / 4.0,
                        std::numbers::pi / 2.0};
    } else {
        cfg.grid = GridSection{256, 64.0};
        cfg.schedule = PulseSchedule{0.0, 2.0, 6.0, 8.0, 1.0};
        cfg.evolution = EvolutionSection{0.02, 10};
        cfg.moving_packet = PacketSection{-5.0, 2.0, 0.5};
        cfg.induced_packet = PacketSection{0.0, 1.5, 0.0}; // width = wall gap / 8
        cfg.confinement = ConfinementSection{-6.0, 6.0, 40.0, 0.4};
        cfg.fringe.tilt = 2.0 * std::numbers::pi * 16.0 / cfg.grid.length;
        cfg.sweep_v0 = {0.0, 1.0, 10.0, 100.0};
    }
    return cfg;
}

} // namespace abtube
