#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "abtube/errors.hpp"
#include "abtube/grid.hpp"

namespace abtube {

/// Recombine two branch fields with a relative tilt kappa:
/// I(x) = |psi1(x) + exp(i kappa x) psi2(x)|^2 * dx.
inline std::vector<double> synthesize_fringes(const ComplexField& branch1,
                                              const ComplexField& branch2, double tilt) {
    if (!(branch1.grid == branch2.grid))
        throw config_error("synthesize_fringes: branches live on different grids");
    if (branch1.grid.dims != 1)
        throw config_error("synthesize_fringes: project two-particle fields onto "
                           "the x-axis first");
    if (tilt == 0.0)
        throw config_error("synthesize_fringes: tilt must be nonzero (degenerate fringe)");
    const SpatialGrid& g = branch1.grid;
    std::vector<double> intensity(g.size());
    for (int i = 0; i < g.n_points; ++i) {
        const cplx sum =
            branch1.values[i] + std::polar(1.0, tilt * g.coord(i)) * branch2.values[i];
        intensity[i] = std::norm(sum) * g.spacing();
    }
    return intensity;
}

namespace detail {

/// Complex demodulation of a pattern at the fringe wavenumber:
/// sum_j I(x_j) exp(-i kappa x_j). Its phase tracks the fringe position.
inline cplx demodulate(const std::vector<double>& intensity, const SpatialGrid& grid,
                       double tilt) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < grid.n_points; ++i)
        acc += intensity[i] * std::polar(1.0, -tilt * grid.coord(i));
    return acc;
}

inline double total_intensity(const std::vector<double>& intensity) {
    double acc = 0.0;
    for (double v : intensity) acc += v;
    return acc;
}

} // namespace detail

/// Fringe visibility: 2 |demod| / total. 1 for a full-contrast two-beam
/// pattern, 0 for a flat envelope.
inline double fringe_visibility(const std::vector<double>& intensity,
                                const SpatialGrid& grid, double tilt) {
    if (tilt == 0.0) throw config_error("fringe_visibility: tilt must be nonzero");
    if (intensity.size() != grid.size())
        throw config_error("fringe_visibility: pattern size does not match grid");
    const double total = detail::total_intensity(intensity);
    if (!(total > 0.0)) return 0.0;
    return 2.0 * std::abs(detail::demodulate(intensity, grid, tilt)) / total;
}

/// Displacement of pattern i_on relative to i_off in fringe periods, in
/// (-0.5, 0.5]. The zero-lag cross-correlation of the demodulated patterns
/// carries the displacement in its phase, giving a sub-pixel shift estimate;
/// equals delta_phi / 2 pi mod 1 for ideal two-beam patterns.
inline double fringe_shift(const std::vector<double>& i_on,
                           const std::vector<double>& i_off, const SpatialGrid& grid,
                           double tilt) {
    if (tilt == 0.0)
        throw config_error("fringe_shift: tilt must be nonzero (degenerate fringe)");
    if (i_on.size() != grid.size() || i_off.size() != grid.size())
        throw config_error("fringe_shift: patterns must share the grid");
    const double vis_on = fringe_visibility(i_on, grid, tilt);
    const double vis_off = fringe_visibility(i_off, grid, tilt);
    if (vis_on <= 0.5 || vis_off <= 0.5)
        throw audit_error("fringe_shift: fringe visibility below 0.5 (on " +
                          std::to_string(vis_on) + ", off " + std::to_string(vis_off) + ")");
    const cplx corr = std::conj(detail::demodulate(i_off, grid, tilt)) *
                      detail::demodulate(i_on, grid, tilt);
    double shift = -std::arg(corr) / (2.0 * std::numbers::pi);
    if (shift <= -0.5) shift += 1.0;
    return shift + 0.0; // never -0.0
}

/// y-marginal amplitude <chi(y)|psi(x, y)>: reduces a two-particle field to
/// the moving-charge axis against a fixed reference mode.
inline ComplexField project_onto_reference(const ComplexField& psi2d,
                                           const ComplexField& chi) {
    if (psi2d.grid.dims != 2)
        throw config_error("project_onto_reference: expected a 2D field");
    if (chi.grid.dims != 1 || chi.grid.n_points != psi2d.grid.n_points ||
        chi.grid.length != psi2d.grid.length)
        throw config_error("project_onto_reference: reference mode grid mismatch");
    const int n = psi2d.grid.n_points;
    const double dy = chi.grid.spacing();
    ComplexField out{chi.grid, std::vector<cplx>(static_cast<std::size_t>(n))};
    for (int ix = 0; ix < n; ++ix) {
        cplx acc{0.0, 0.0};
        const cplx* row = psi2d.values.data() + static_cast<std::size_t>(ix) * n;
        for (int iy = 0; iy < n; ++iy) acc += std::conj(chi.values[iy]) * row[iy];
        out.values[ix] = acc * dy;
    }
    return out;
}

} // namespace abtube
