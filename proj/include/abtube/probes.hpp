#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "abtube/grid.hpp"
#include "abtube/hamiltonian.hpp"
#include "abtube/potentials.hpp"
#include "abtube/propagator.hpp"

namespace abtube {

struct ProbeResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline ComplexField probe_packet(const SpatialGrid& grid, double center, double k0) {
    return gaussian_packet(grid, PacketSpec{center, 1.0, k0});
}

inline double l2_difference(const ComplexField& a, const ComplexField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        acc += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(acc * a.grid.cell_volume());
}

inline ComplexField evolve_final(const ComplexField& psi0, const HamiltonianSpec& h,
                                 double dt, long steps) {
    ComplexField psi = psi0;
    Propagator prop(psi.grid, h);
    for (long k = 0; k < steps; ++k) prop.step_in_place(psi, k * dt, dt);
    return psi;
}

} // namespace detail

/// Norm conservation over 1e4 steps of a harmonic well; the split phases are
/// unimodular, so any drift is transform round-off.
inline ProbeResult norm_drift_probe(double dt) {
    const SpatialGrid grid = make_grid(256, 32.0, 1);
    ComplexField psi = detail::probe_packet(grid, 2.0, 0.0);
    const HamiltonianSpec h = static_hamiltonian(
        {1.0}, [](double x, double) { return 0.5 * x * x; });
    Propagator prop(grid, h);
    double drift = 0.0;
    const long steps = 10000;
    for (long k = 0; k < steps; ++k) {
        const double norm = prop.step_in_place(psi, k * dt, dt);
        drift = std::max(drift, std::abs(norm - 1.0));
    }
    ProbeResult r{"norm_drift", drift, 1e-10, drift < 1e-10,
                  std::to_string(steps) + " steps, dt = " + std::to_string(dt)};
    return r;
}

/// Least-squares slope of log(error) vs log(dt) for dt, dt/2, dt/4, each
/// measured against its own dt/8 reference at the same physical time.
/// Second-order splitting must land at 2.0 +/- 0.2.
inline ProbeResult convergence_order_probe(double dt) {
    const SpatialGrid grid = make_grid(256, 32.0, 1);
    const ComplexField psi0 = detail::probe_packet(grid, 2.0, 0.0);
    const HamiltonianSpec h = static_hamiltonian(
        {1.0}, [](double x, double) { return 0.5 * x * x; });

    long base_steps = std::lround(1.0 / dt);
    if (base_steps < 8) base_steps = 8;

    std::vector<double> log_h, log_e;
    for (int level = 0; level < 3; ++level) {
        const double h_step = dt / (1 << level);
        const long n_steps = base_steps << level;
        const ComplexField coarse = detail::evolve_final(psi0, h, h_step, n_steps);
        const ComplexField ref = detail::evolve_final(psi0, h, h_step / 8.0, n_steps * 8);
        const double err = detail::l2_difference(coarse, ref);
        if (!(err > 0.0)) {
            return ProbeResult{"convergence_order", 0.0, 0.2, false,
                               "degenerate error at dt = " + std::to_string(h_step)};
        }
        log_h.push_back(std::log(h_step));
        log_e.push_back(std::log(err));
    }
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        mean_x += log_h[i];
        mean_y += log_e[i];
    }
    mean_x /= log_h.size();
    mean_y /= log_e.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        sxy += (log_h[i] - mean_x) * (log_e[i] - mean_y);
        sxx += (log_h[i] - mean_x) * (log_h[i] - mean_x);
    }
    const double slope = sxy / sxx;
    ProbeResult r{"convergence_order", slope, 0.2, std::abs(slope - 2.0) <= 0.2,
                  "slope over dt halvings from dt = " + std::to_string(dt)};
    return r;
}

/// A spatially uniform potential c(t) must only rotate the global phase:
/// sup |psi_c - exp(-i int c dt) psi_free| stays below 1e-10.
inline ProbeResult gauge_invariance_probe(double dt) {
    const SpatialGrid grid = make_grid(256, 32.0, 1);
    const ComplexField psi0 = detail::probe_packet(grid, 0.0, 1.0);
    long quarter = std::lround(0.5 / dt);
    if (quarter < 2) quarter = 2;
    const long steps = 4 * quarter;
    const PulseSchedule s{0.0, quarter * dt, 3 * quarter * dt, steps * dt, 2.0};

    const HamiltonianSpec h_free = free_hamiltonian(1.0);
    const HamiltonianSpec h_uniform{
        {1.0}, [s](double, double, double t) { return shutter_voltage(t, s); }, true};

    const ComplexField a = detail::evolve_final(psi0, h_free, dt, steps);
    const ComplexField b = detail::evolve_final(psi0, h_uniform, dt, steps);
    const cplx expected_phase = std::polar(1.0, -shutter_integral(s, s.t0, s.t3));
    double sup = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        sup = std::max(sup, std::abs(b.values[i] - expected_phase * a.values[i]));
    ProbeResult r{"gauge_invariance", sup, 1e-10, sup < 1e-10,
                  "uniform pulse vs free evolution, " + std::to_string(steps) + " steps"};
    return r;
}

inline std::vector<ProbeResult> run_validation_probes(double dt) {
    return {norm_drift_probe(dt), convergence_order_probe(dt), gauge_invariance_probe(dt)};
}

} // namespace abtube
