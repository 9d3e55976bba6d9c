#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "abtube/analytic.hpp"
#include "abtube/errors.hpp"
#include "abtube/fringes.hpp"
#include "abtube/grid.hpp"
#include "abtube/hamiltonian.hpp"
#include "abtube/potentials.hpp"
#include "abtube/propagator.hpp"
#include "abtube/run_config.hpp"

namespace abtube {

/// The two coherent branches of the split beam, one per tube, each evolved
/// under its own Hamiltonian on the same grid.
struct BranchPair {
    ComplexField branch1;
    ComplexField branch2;
};

inline std::vector<double> synthesize_fringes(const BranchPair& pair, double tilt) {
    return synthesize_fringes(pair.branch1, pair.branch2, tilt);
}

struct SimulationReport {
    RunConfig config;
    bool external_on = true;

    double measured_delta_phi = 0.0;
    double analytic_delta_phi = 0.0;
    double overlap_modulus = 0.0;
    double deviation_sup = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double energy_time = 0.0;
    double norm_drift = 0.0;
    double fringe_shift_periods = 0.0;
    double fringe_visibility_off = 0.0;
    double fringe_visibility_on = 0.0;
    double exterior_probability = 0.0;
    long steps = 0;

    std::vector<double> fringe_x;
    std::vector<double> fringe_intensity_off;
    std::vector<double> fringe_intensity_on;

    std::string modeling_note;
};

struct AuditCheck {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Probability of finding the induced particle in the outer quarter of the
/// y-axis on either side (|y| > 3/4 of the half-length). Config validation
/// keeps the walls well inside that band, so mass out there means the
/// particle made it past a wall and is headed for the periodic wrap-around.
inline double wall_exterior_probability(const ComplexField& psi2d) {
    if (psi2d.grid.dims != 2)
        throw config_error("wall_exterior_probability: expected a 2D field");
    const SpatialGrid& g = psi2d.grid;
    const double cut = 0.375 * g.length; // 3/4 of the half-length
    const int n = g.n_points;
    double p = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double y = g.coord(iy);
        if (y >= -cut && y <= cut) continue;
        double col = 0.0;
        for (int ix = 0; ix < n; ++ix)
            col += std::norm(psi2d.values[static_cast<std::size_t>(ix) * n + iy]);
        p += col;
    }
    return p * g.cell_volume();
}

struct AuditVerdict {
    bool passed = true;
    std::vector<AuditCheck> checks;
};

namespace detail {

struct LockstepOutcome {
    ComplexField branch1;
    ComplexField branch2_ref;  // external generator off
    ComplexField branch2_pert; // as configured (on or off)
    double norm_drift = 0.0;
    double measured_phase = 0.0;
    double overlap_modulus = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double energy_time = 0.0;
    double exterior_max = 0.0;
    long steps = 0;
};

inline long aligned_steps(double span, double dt, const char* what) {
    const double ratio = span / dt;
    const long steps = std::lround(ratio);
    if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, std::abs(ratio)))
        throw config_error(std::string(what) + ": interval is not a whole number of steps");
    return steps;
}

/// Evolves branch 1, the unperturbed branch 2, and the configured branch 2
/// in lockstep over [t0, t3], tracking the unwrapped relative phase of the
/// branch-2 pair every step, the norm drift, and mid-pulse energies.
/// exterior_probability, when given, is evaluated on every field every step;
/// crossing leak_threshold raises a confinement failure.
template <typename ExteriorFn>
inline LockstepOutcome run_lockstep(const ComplexField& psi0, const HamiltonianSpec& h1,
                                    const HamiltonianSpec& h2_ref,
                                    const HamiltonianSpec& h2_pert,
                                    const PulseSchedule& s, double dt,
                                    ExteriorFn&& exterior_probability,
                                    double leak_threshold) {
    LockstepOutcome out;
    const long steps = aligned_steps(s.t3 - s.t0, dt, "schedule");
    const long idx1 = aligned_steps(s.t1 - s.t0, dt, "schedule.t1");
    const long idx2 = aligned_steps(s.t2 - s.t0, dt, "schedule.t2");
    const long idx_mid = (idx1 + idx2) / 2;
    out.steps = steps;

    out.branch1 = psi0;
    out.branch2_ref = psi0;
    out.branch2_pert = psi0;
    Propagator prop1(psi0.grid, h1);
    Propagator prop2_ref(psi0.grid, h2_ref);
    Propagator prop2_pert(psi0.grid, h2_pert);

    const auto check_leak = [&](const ComplexField& f, double t) {
        const double p = exterior_probability(f);
        out.exterior_max = std::max(out.exterior_max, p);
        if (p > leak_threshold)
            throw audit_error("confinement failure: wall-exterior probability " +
                              std::to_string(p) + " at t = " + std::to_string(t));
    };
    check_leak(out.branch1, s.t0);

    double phase = 0.0;
    cplx overlap{1.0, 0.0};
    for (long k = 0; k < steps; ++k) {
        const double t = s.t0 + k * dt;
        double norms[3];
        try {
            norms[0] = prop1.step_in_place(out.branch1, t, dt);
            norms[1] = prop2_ref.step_in_place(out.branch2_ref, t, dt);
            norms[2] = prop2_pert.step_in_place(out.branch2_pert, t, dt);
        } catch (const blowup_error& e) {
            throw blowup_error(std::string(e.what()) + " (step " + std::to_string(k) + ")",
                               k);
        }
        for (double n : norms)
            out.norm_drift = std::max(out.norm_drift, std::abs(n - 1.0));

        overlap = inner_product(out.branch2_ref, out.branch2_pert);
        const double raw = -std::arg(overlap);
        phase = raw + 2.0 * std::numbers::pi *
                          std::round((phase - raw) / (2.0 * std::numbers::pi));

        const double t_next = s.t0 + (k + 1) * dt;
        check_leak(out.branch1, t_next);
        check_leak(out.branch2_ref, t_next);
        check_leak(out.branch2_pert, t_next);

        if (k + 1 == idx_mid) {
            out.energy_time = t_next;
            out.e1 = expectation_energy(out.branch1, h1, t_next);
            out.e2 = expectation_energy(out.branch2_pert, h2_pert, t_next);
        }
    }

    out.measured_phase = phase + 0.0; // normalize -0.0
    out.overlap_modulus = std::abs(overlap);
    if (out.overlap_modulus < 0.999)
        throw audit_error("model violation: branch-2 overlap modulus " +
                          std::to_string(out.overlap_modulus) +
                          " (the branch perturbation should be a pure phase)");
    return out;
}

inline double sup_deviation(const ComplexField& a, const ComplexField& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        sup = std::max(sup, std::abs(a.values[i] - b.values[i]));
    return sup;
}

inline void fill_fringes(SimulationReport& rep, const ComplexField& b1,
                         const ComplexField& b2_ref, const ComplexField& b2_pert,
                         double tilt) {
    const SpatialGrid& g = b1.grid;
    rep.fringe_x.resize(g.size());
    for (int i = 0; i < g.n_points; ++i) rep.fringe_x[i] = g.coord(i);
    rep.fringe_intensity_off = synthesize_fringes(b1, b2_ref, tilt);
    rep.fringe_intensity_on = synthesize_fringes(b1, b2_pert, tilt);
    rep.fringe_visibility_off = fringe_visibility(rep.fringe_intensity_off, g, tilt);
    rep.fringe_visibility_on = fringe_visibility(rep.fringe_intensity_on, g, tilt);
    rep.fringe_shift_periods =
        fringe_shift(rep.fringe_intensity_on, rep.fringe_intensity_off, g, tilt);
}

constexpr const char* kTubeStageNote =
    "run covers the in-tube stage t0..t3 only; outside it both branches "
    "propagate freely and accumulate the same phase, which drops out of the "
    "interference";

} // namespace detail

/// Branch 1 free, branch 2 free plus q U(t) when the generator is on; the
/// unperturbed pair is evolved alongside as the phase reference.
inline SimulationReport run_single_particle(const RunConfig& cfg, bool external_on) {
    RunConfig run_cfg = cfg;
    run_cfg.mode = RunMode::single_particle;
    run_cfg.external_on = external_on;
    validate_or_throw(run_cfg);

    const SpatialGrid grid = make_grid(cfg.grid.n_points, cfg.grid.length, 1);
    const ComplexField psi0 = gaussian_packet(
        grid, PacketSpec{cfg.moving_packet.center, cfg.moving_packet.width,
                         cfg.moving_packet.wavenumber});
    const PulseSchedule s = cfg.schedule;
    const ChargeConfig charges = run_cfg.charge_config();

    const HamiltonianSpec h1 = free_hamiltonian(charges.m);
    const HamiltonianSpec h2_ref = free_hamiltonian(charges.m);
    HamiltonianSpec h2_pert = h2_ref;
    if (external_on) {
        h2_pert = HamiltonianSpec{
            {charges.m},
            [s, charges](double x, double, double t) {
                return branch_potential_single(x, t, 2, s, charges);
            },
            true};
    }

    const auto no_monitor = [](const ComplexField&) { return 0.0; };
    detail::LockstepOutcome out = detail::run_lockstep(
        psi0, h1, h2_ref, h2_pert, s, cfg.evolution.dt, no_monitor, 1.0);

    SimulationReport rep;
    rep.config = run_cfg;
    rep.external_on = external_on;
    rep.measured_delta_phi = out.measured_phase;
    rep.analytic_delta_phi = ab_phase(s, external_on ? charges.q : 0.0).delta_phi;
    rep.overlap_modulus = out.overlap_modulus;
    rep.deviation_sup = detail::sup_deviation(out.branch2_pert, out.branch2_ref);
    rep.e1 = out.e1;
    rep.e2 = out.e2;
    rep.energy_time = out.energy_time;
    rep.norm_drift = out.norm_drift;
    rep.exterior_probability = 0.0;
    rep.steps = out.steps;
    rep.modeling_note = detail::kTubeStageNote;
    detail::fill_fringes(rep, out.branch1, out.branch2_ref, out.branch2_pert,
                         cfg.fringe.tilt);
    return rep;
}

/// Both branches carry the moving charge and the confined induced charge
/// with their Coulomb coupling; branch 2 additionally sees
/// (q + q_induced) U(t) when the generator is on.
inline SimulationReport run_two_particle(const RunConfig& cfg, bool external_on) {
    RunConfig run_cfg = cfg;
    run_cfg.mode = RunMode::two_particle;
    run_cfg.external_on = external_on;
    validate_or_throw(run_cfg);

    const SpatialGrid grid1 = make_grid(cfg.grid.n_points, cfg.grid.length, 1);
    const ComplexField moving = gaussian_packet(
        grid1, PacketSpec{cfg.moving_packet.center, cfg.moving_packet.width,
                          cfg.moving_packet.wavenumber});
    const ComplexField induced = gaussian_packet(
        grid1, PacketSpec{cfg.induced_packet.center, cfg.induced_packet.width,
                          cfg.induced_packet.wavenumber});
    const ComplexField psi0 = tensor_product(moving, induced);

    const PulseSchedule s = cfg.schedule;
    const ChargeConfig charges = run_cfg.charge_config();
    const ConfinementSpec conf = run_cfg.confinement_spec();
    const std::vector<double> masses{charges.m, charges.m_induced};

    const HamiltonianSpec h1{
        masses,
        [s, charges, conf](double x, double y, double t) {
            return branch_potential_pair(x, y, t, 1, s, charges, conf, false);
        },
        false};
    const HamiltonianSpec h2_ref{
        masses,
        [s, charges, conf](double x, double y, double t) {
            return branch_potential_pair(x, y, t, 2, s, charges, conf, false);
        },
        false};
    HamiltonianSpec h2_pert = h2_ref;
    if (external_on) {
        h2_pert = HamiltonianSpec{
            masses,
            [s, charges, conf](double x, double y, double t) {
                return branch_potential_pair(x, y, t, 2, s, charges, conf, true);
            },
            true};
    }

    const auto exterior_probability = [](const ComplexField& f) {
        return wall_exterior_probability(f);
    };
    detail::LockstepOutcome out = detail::run_lockstep(
        psi0, h1, h2_ref, h2_pert, s, cfg.evolution.dt, exterior_probability, 1e-6);

    SimulationReport rep;
    rep.config = run_cfg;
    rep.external_on = external_on;
    rep.measured_delta_phi = out.measured_phase;
    rep.analytic_delta_phi =
        ab_phase(s, external_on ? charges.q + charges.q_induced : 0.0).delta_phi;
    rep.overlap_modulus = out.overlap_modulus;
    rep.deviation_sup = detail::sup_deviation(out.branch2_pert, out.branch2_ref);
    rep.e1 = out.e1;
    rep.e2 = out.e2;
    rep.energy_time = out.energy_time;
    rep.norm_drift = out.norm_drift;
    rep.exterior_probability = out.exterior_max;
    rep.steps = out.steps;
    rep.modeling_note = detail::kTubeStageNote;

    const ComplexField xi1 = project_onto_reference(out.branch1, induced);
    const ComplexField xi2_ref = project_onto_reference(out.branch2_ref, induced);
    const ComplexField xi2_pert = project_onto_reference(out.branch2_pert, induced);
    detail::fill_fringes(rep, xi1, xi2_ref, xi2_pert, cfg.fringe.tilt);
    return rep;
}

inline SimulationReport run_scenario(const RunConfig& cfg) {
    return cfg.mode == RunMode::single_particle
               ? run_single_particle(cfg, cfg.external_on)
               : run_two_particle(cfg, cfg.external_on);
}

/// Energy bookkeeping checks on a finished run. Physical two-particle runs
/// must show exactly equal branch energies; everything else must show the
/// branch gap implied by the effective coupling at mid-pulse.
inline AuditVerdict energy_audit(const SimulationReport& report, const RunConfig& cfg) {
    AuditVerdict verdict;
    const ChargeConfig charges = cfg.charge_config();
    const bool physical_pair = cfg.mode == RunMode::two_particle && !charges.detuned &&
                               charges.q_induced == -charges.q;
    if (physical_pair) {
        AuditCheck check;
        check.name = "two_particle_energy_equality";
        check.value = std::abs(report.e1 - report.e2);
        check.expected = 0.0;
        check.tolerance = 1e-10 * std::max(std::abs(report.e1), 1.0);
        check.passed = check.value <= check.tolerance;
        verdict.checks.push_back(check);
    } else {
        const double coupling = cfg.mode == RunMode::single_particle
                                    ? charges.q
                                    : charges.q + charges.q_induced;
        AuditCheck check;
        check.name = cfg.mode == RunMode::single_particle
                         ? "single_particle_energy_gap"
                         : "two_particle_energy_gap";
        check.value = report.e2 - report.e1;
        check.expected = report.external_on ? coupling * cfg.schedule.v0 : 0.0;
        check.tolerance = 1e-6;
        check.passed = std::abs(check.value - check.expected) <= check.tolerance;
        verdict.checks.push_back(check);
    }
    for (const AuditCheck& c : verdict.checks) verdict.passed = verdict.passed && c.passed;
    return verdict;
}

inline void require_audit_pass(const AuditVerdict& verdict) {
    for (const AuditCheck& c : verdict.checks)
        if (!c.passed)
            throw audit_error("audit failure: " + c.name + " value " +
                              std::to_string(c.value) + " expected " +
                              std::to_string(c.expected) + " tolerance " +
                              std::to_string(c.tolerance));
}

struct SweepRow {
    double v0 = 0.0;
    double delta_phi_measured = 0.0;
    double delta_phi_analytic = 0.0;
    double fringe_shift_periods = 0.0;
};

/// One full run per v0, in input order. Single-particle rows must reproduce
/// the closed-form phase; physical two-particle rows must stay at zero.
inline std::vector<SweepRow> sweep_voltage(const RunConfig& cfg,
                                           const std::vector<double>& v0_values) {
    if (v0_values.empty()) throw config_error("sweep: v0 list must not be empty");
    const ChargeConfig charges = cfg.charge_config();
    const bool physical_pair = cfg.mode == RunMode::two_particle && !charges.detuned &&
                               charges.q_induced == -charges.q;
    std::vector<SweepRow> rows;
    rows.reserve(v0_values.size());
    for (double v0 : v0_values) {
        RunConfig point = cfg;
        point.schedule.v0 = v0;
        const SimulationReport rep = run_scenario(point);
        SweepRow row{v0, rep.measured_delta_phi, rep.analytic_delta_phi,
                     rep.fringe_shift_periods};
        if (cfg.mode == RunMode::single_particle && cfg.external_on) {
            if (std::abs(row.delta_phi_measured - row.delta_phi_analytic) > 1e-6)
                throw audit_error("sweep: measured phase " +
                                  std::to_string(row.delta_phi_measured) +
                                  " deviates from closed form " +
                                  std::to_string(row.delta_phi_analytic) +
                                  " at v0 = " + std::to_string(v0));
        } else if (physical_pair) {
            if (std::abs(row.delta_phi_measured) >= 1e-10)
                throw audit_error("sweep: physical two-particle phase " +
                                  std::to_string(row.delta_phi_measured) +
                                  " nonzero at v0 = " + std::to_string(v0));
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace abtube
