#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "abtube/errors.hpp"
#include "abtube/fft.hpp"
#include "abtube/grid.hpp"

namespace abtube {

/// Kinetic masses per axis plus one potential term V(x, y, t); y is ignored
/// on 1D grids. time_dependent tells the propagator whether V may be
/// sampled once or must be re-sampled every step.
struct HamiltonianSpec {
    std::vector<double> masses;
    std::function<double(double, double, double)> potential;
    bool time_dependent = false;
};

inline HamiltonianSpec free_hamiltonian(double mass) {
    return HamiltonianSpec{{mass}, [](double, double, double) { return 0.0; }, false};
}

inline HamiltonianSpec static_hamiltonian(std::vector<double> masses,
                                          std::function<double(double, double)> v) {
    return HamiltonianSpec{
        std::move(masses),
        [v = std::move(v)](double x, double y, double) { return v(x, y); }, false};
}

inline void check_hamiltonian(const HamiltonianSpec& h, const SpatialGrid& grid) {
    if (static_cast<int>(h.masses.size()) != grid.dims)
        throw config_error("hamiltonian: need one mass per grid axis");
    for (double m : h.masses)
        if (!(m > 0.0)) throw config_error("hamiltonian: masses must be positive");
    if (!h.potential) throw config_error("hamiltonian: missing potential");
}

namespace detail {

/// Kinetic energies k^2/2m per FFT bin, one table per axis.
inline std::vector<double> kinetic_axis(const SpatialGrid& grid, double mass) {
    std::vector<double> k(grid.n_points);
    for (int j = 0; j < grid.n_points; ++j) {
        const double kj = grid.momentum(j);
        k[j] = kj * kj / (2.0 * mass);
    }
    return k;
}

inline void sample_potential(const HamiltonianSpec& h, const SpatialGrid& grid,
                             double t, std::vector<double>& out) {
    out.resize(grid.size());
    const int n = grid.n_points;
    if (grid.dims == 1) {
        for (int i = 0; i < n; ++i) out[i] = h.potential(grid.coord(i), 0.0, t);
    } else {
        for (int ix = 0; ix < n; ++ix) {
            const double x = grid.coord(ix);
            for (int iy = 0; iy < n; ++iy)
                out[static_cast<std::size_t>(ix) * n + iy] =
                    h.potential(x, grid.coord(iy), t);
        }
    }
    for (double v : out)
        if (!std::isfinite(v))
            throw blowup_error("potential is not finite on the grid");
}

} // namespace detail

/// <psi|H(t)|psi> by spectral kinetic quadrature plus potential quadrature.
/// The raw quadrature must come out real to 1e-10; the imaginary part is
/// checked and discarded.
inline double expectation_energy(const ComplexField& psi, const HamiltonianSpec& h,
                                 double t) {
    check_hamiltonian(h, psi.grid);
    if (std::abs(psi.norm_squared() - 1.0) > 1e-8)
        throw config_error("expectation_energy: field is not normalized");

    const SpatialGrid& grid = psi.grid;
    const int n = grid.n_points;
    std::vector<cplx> h_psi = psi.values;

    // Kinetic part: multiply the spectrum by k^2/2m per axis, come back.
    if (grid.dims == 1) {
        FftPlan plan(static_cast<std::size_t>(n));
        plan.forward(h_psi.data());
        const std::vector<double> kx = detail::kinetic_axis(grid, h.masses[0]);
        for (int j = 0; j < n; ++j) h_psi[j] *= kx[j];
        plan.inverse(h_psi.data());
    } else {
        FftPlan2d plan(static_cast<std::size_t>(n));
        plan.forward(h_psi.data());
        const std::vector<double> kx = detail::kinetic_axis(grid, h.masses[0]);
        const std::vector<double> ky = detail::kinetic_axis(grid, h.masses[1]);
        for (int jx = 0; jx < n; ++jx)
            for (int jy = 0; jy < n; ++jy)
                h_psi[static_cast<std::size_t>(jx) * n + jy] *= kx[jx] + ky[jy];
        plan.inverse(h_psi.data());
    }

    std::vector<double> v;
    detail::sample_potential(h, grid, t, v);
    for (std::size_t i = 0; i < h_psi.size(); ++i) h_psi[i] += v[i] * psi.values[i];

    const cplx e = inner_product(psi, ComplexField{grid, std::move(h_psi)});
    if (std::abs(e.imag()) > 1e-10)
        throw audit_error("expectation_energy: quadrature has imaginary part " +
                          std::to_string(e.imag()));
    return e.real();
}

} // namespace abtube
