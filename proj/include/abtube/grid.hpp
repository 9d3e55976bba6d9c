#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "abtube/errors.hpp"
#include "abtube/fft.hpp"

namespace abtube {

// Natural units throughout: hbar = 1, masses in units of the reference mass,
// 4*pi*eps0 = 1.

/// Uniform periodic grid, centered on the origin: x_i = -L/2 + i*dx.
/// dims == 2 is the square tensor-product grid for the (x, y) two-particle
/// space, row-major with x as the slow index.
struct SpatialGrid {
    int n_points = 0;
    double length = 0.0;
    int dims = 1;

    double spacing() const { return length / n_points; }
    double momentum_spacing() const { return 2.0 * std::numbers::pi / length; }

    std::size_t size() const {
        const auto n = static_cast<std::size_t>(n_points);
        return dims == 2 ? n * n : n;
    }

    double coord(int i) const { return -0.5 * length + i * spacing(); }

    /// FFT-ordered momentum value of bin j; spans [-pi/spacing, pi/spacing).
    double momentum(int j) const {
        const int shifted = j < n_points / 2 ? j : j - n_points;
        return momentum_spacing() * shifted;
    }

    double cell_volume() const { return dims == 2 ? spacing() * spacing() : spacing(); }

    bool operator==(const SpatialGrid&) const = default;
};

inline SpatialGrid make_grid(int n_points, double length, int dims) {
    if (n_points < 64 || !std::has_single_bit(static_cast<unsigned>(n_points)))
        throw config_error("make_grid: n_points must be a power of two >= 64, got " +
                           std::to_string(n_points));
    if (!(length > 0.0) || !std::isfinite(length))
        throw config_error("make_grid: length must be positive and finite");
    if (dims != 1 && dims != 2)
        throw config_error("make_grid: dims must be 1 or 2, got " + std::to_string(dims));
    return SpatialGrid{n_points, length, dims};
}

/// Complex amplitudes on a grid, one value per point. Immutable by
/// convention once built; all operations below return fresh fields.
struct ComplexField {
    SpatialGrid grid;
    std::vector<cplx> values;

    /// Discrete L2 norm squared: sum |psi_i|^2 * dx^dims.
    double norm_squared() const {
        double acc = 0.0;
        for (const cplx& v : values) acc += std::norm(v);
        return acc * grid.cell_volume();
    }

    double norm() const { return std::sqrt(norm_squared()); }

    bool is_normalized(double tol = 1e-12) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }
};

struct PacketSpec {
    double center = 0.0;
    double width = 1.0;      // sigma
    double wavenumber = 0.0; // k0
};

/// Normalized Gaussian packet exp(-(x-x0)^2/(4 sigma^2)) * exp(i k0 x) on a
/// 1D grid. Rejects packets the grid cannot resolve and packets whose tails
/// touch the periodic boundary above 1e-10 of the peak amplitude.
inline ComplexField gaussian_packet(const SpatialGrid& grid, const PacketSpec& spec) {
    if (grid.dims != 1)
        throw config_error("gaussian_packet: expected a 1D grid (build 2D states "
                           "with tensor_product)");
    if (!(spec.width > 0.0))
        throw config_error("gaussian_packet: width must be positive");
    if (spec.width < 4.0 * grid.spacing())
        throw config_error("gaussian_packet: width " + std::to_string(spec.width) +
                           " not resolvable, need >= 4 * spacing = " +
                           std::to_string(4.0 * grid.spacing()));
    const double half = 0.5 * grid.length;
    const double d_low = spec.center + half;
    const double d_high = half - spec.center;
    const double d_min = std::min(d_low, d_high);
    constexpr double tail_limit = 1e-10;
    if (d_min <= 0.0 ||
        std::exp(-d_min * d_min / (4.0 * spec.width * spec.width)) > tail_limit)
        throw config_error("gaussian_packet: tail at the domain boundary exceeds "
                           "1e-10 of the peak; enlarge the domain or narrow the packet");

    ComplexField f{grid, std::vector<cplx>(grid.size())};
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.coord(i);
        const double dx0 = x - spec.center;
        const double envelope = std::exp(-dx0 * dx0 / (4.0 * spec.width * spec.width));
        f.values[i] = std::polar(envelope, spec.wavenumber * x);
    }
    const double n = f.norm();
    for (cplx& v : f.values) v /= n;
    return f;
}

/// Product state psi(x, y) = a(x) * b(y) on the square 2D grid.
inline ComplexField tensor_product(const ComplexField& a, const ComplexField& b) {
    if (a.grid.dims != 1 || b.grid.dims != 1)
        throw config_error("tensor_product: factors must be 1D fields");
    if (a.grid.n_points != b.grid.n_points || a.grid.length != b.grid.length)
        throw config_error("tensor_product: factor grids must match");
    const SpatialGrid grid2{a.grid.n_points, a.grid.length, 2};
    ComplexField f{grid2, std::vector<cplx>(grid2.size())};
    const int n = grid2.n_points;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            f.values[static_cast<std::size_t>(ix) * n + iy] = a.values[ix] * b.values[iy];
    return f;
}

/// <a|b> = sum conj(a_i) b_i * dx^dims. Conjugate-symmetric by construction.
inline cplx inner_product(const ComplexField& a, const ComplexField& b) {
    if (!(a.grid == b.grid))
        throw config_error("inner_product: fields live on different grids");
    cplx acc{0.0, 0.0};
    const std::size_t n = a.values.size();
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(a.values[i]) * b.values[i];
    return acc * a.grid.cell_volume();
}

inline double expectation_position(const ComplexField& f) {
    if (f.grid.dims != 1) throw config_error("expectation_position: 1D fields only");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < f.grid.n_points; ++i) {
        const double w = std::norm(f.values[i]);
        num += f.grid.coord(i) * w;
        den += w;
    }
    return num / den;
}

inline double position_variance(const ComplexField& f) {
    if (f.grid.dims != 1) throw config_error("position_variance: 1D fields only");
    const double mean = expectation_position(f);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < f.grid.n_points; ++i) {
        const double w = std::norm(f.values[i]);
        const double d = f.grid.coord(i) - mean;
        num += d * d * w;
        den += w;
    }
    return num / den;
}

/// Momentum expectation from the discrete spectrum.
inline double expectation_momentum(const ComplexField& f) {
    if (f.grid.dims != 1) throw config_error("expectation_momentum: 1D fields only");
    std::vector<cplx> spec = f.values;
    FftPlan plan(spec.size());
    plan.forward(spec.data());
    double num = 0.0, den = 0.0;
    for (int j = 0; j < f.grid.n_points; ++j) {
        const double w = std::norm(spec[j]);
        num += f.grid.momentum(j) * w;
        den += w;
    }
    return num / den;
}

} // namespace abtube
