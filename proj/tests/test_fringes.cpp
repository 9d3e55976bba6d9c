#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "abtube/analytic.hpp"
#include "abtube/fringes.hpp"
#include "abtube/grid.hpp"
#include "test_oracles.hpp"

using abtube::ComplexField;
using abtube::cplx;
using abtube::PacketSpec;
using abtube::SpatialGrid;

namespace {

const SpatialGrid kGrid = abtube::make_grid(1024, 100.0, 1);
const double kTilt = 2.0 * std::numbers::pi * 16.0 / kGrid.length;

ComplexField envelope_packet() {
    return abtube::gaussian_packet(kGrid, PacketSpec{0.0, 5.0, 0.0});
}

ComplexField rotated(const ComplexField& f, double phase) {
    ComplexField out = f;
    for (cplx& v : out.values) v *= std::polar(1.0, phase);
    return out;
}

std::vector<double> oracle_pattern(double delta_phi) {
    // predicted_intensity with the packet's probability density as envelope,
    // scaled by dx to match the synthesized pattern's normalization.
    const ComplexField psi = envelope_packet();
    std::vector<double> xs(kGrid.size());
    for (int i = 0; i < kGrid.n_points; ++i) xs[i] = kGrid.coord(i);
    const double dx = kGrid.spacing();
    return abtube::predicted_intensity(
        delta_phi, kTilt, xs, [&psi, dx](double x) {
            const int i = static_cast<int>(std::lround((x + 0.5 * kGrid.length) / dx));
            return std::norm(psi.values[i]) * dx;
        });
}

} // namespace

TEST_CASE("equal branches reproduce the two-beam closed form", "[fringes]") {
    const ComplexField psi = envelope_packet();
    const std::vector<double> pattern = abtube::synthesize_fringes(psi, psi, kTilt);
    const std::vector<double> oracle = oracle_pattern(0.0);
    for (std::size_t i = 0; i < pattern.size(); ++i)
        REQUIRE(std::abs(pattern[i] - oracle[i]) < 1e-12);
}

TEST_CASE("opposite branches displace the pattern half a period", "[fringes]") {
    const ComplexField psi = envelope_packet();
    const std::vector<double> pattern =
        abtube::synthesize_fringes(psi, rotated(psi, std::numbers::pi), kTilt);
    const std::vector<double> oracle = oracle_pattern(std::numbers::pi);
    for (std::size_t i = 0; i < pattern.size(); ++i)
        REQUIRE(std::abs(pattern[i] - oracle[i]) < 1e-12);
}

TEST_CASE("a missing branch leaves a flat envelope and no fringe to measure",
          "[fringes]") {
    const ComplexField psi = envelope_packet();
    ComplexField empty = psi;
    for (cplx& v : empty.values) v = 0.0;
    const std::vector<double> flat = abtube::synthesize_fringes(psi, empty, kTilt);
    for (int i = 0; i < kGrid.n_points; ++i)
        REQUIRE(std::abs(flat[i] - std::norm(psi.values[i]) * kGrid.spacing()) < 1e-15);
    REQUIRE(abtube::fringe_visibility(flat, kGrid, kTilt) < 0.05);

    const std::vector<double> good = abtube::synthesize_fringes(psi, psi, kTilt);
    REQUIRE_THROWS_AS(abtube::fringe_shift(flat, good, kGrid, kTilt), abtube::audit_error);
}

TEST_CASE("fringe_shift recovers delta_phi / 2 pi from oracle patterns", "[fringes]") {
    const std::vector<double> reference = oracle_pattern(0.0);
    REQUIRE(abtube::fringe_shift(reference, reference, kGrid, kTilt) == 0.0);

    for (double phi : {std::numbers::pi / 4.0, std::numbers::pi / 2.0, std::numbers::pi,
                       1.5 * std::numbers::pi}) {
        const std::vector<double> moved = oracle_pattern(phi);
        const double shift = abtube::fringe_shift(moved, reference, kGrid, kTilt);
        REQUIRE(shift > -0.5);
        REQUIRE(shift <= 0.5);
        REQUIRE(oracles::circular_distance(shift, phi / (2.0 * std::numbers::pi)) < 0.01);
    }

    // A full turn wraps back to zero.
    const std::vector<double> wrapped = oracle_pattern(2.0 * std::numbers::pi);
    REQUIRE(oracles::circular_distance(
                abtube::fringe_shift(wrapped, reference, kGrid, kTilt), 0.0) < 0.01);
}

TEST_CASE("total intensity is both norms plus a bounded interference term",
          "[fringes]") {
    const ComplexField b1 = envelope_packet();
    const ComplexField b2 =
        abtube::gaussian_packet(kGrid, PacketSpec{4.0, 6.0, 0.3});
    const std::vector<double> pattern = abtube::synthesize_fringes(b1, b2, kTilt);
    double total = 0.0;
    for (double v : pattern) total += v;
    const double n1 = b1.norm_squared(), n2 = b2.norm_squared();
    const double cross_bound = 2.0 * std::sqrt(n1) * std::sqrt(n2);
    REQUIRE(total >= n1 + n2 - cross_bound - 1e-12);
    REQUIRE(total <= n1 + n2 + cross_bound + 1e-12);
}

TEST_CASE("degenerate tilt and mismatched inputs are rejected", "[fringes]") {
    const ComplexField psi = envelope_packet();
    REQUIRE_THROWS_AS(abtube::synthesize_fringes(psi, psi, 0.0), abtube::config_error);
    const std::vector<double> p = abtube::synthesize_fringes(psi, psi, kTilt);
    REQUIRE_THROWS_AS(abtube::fringe_shift(p, p, kGrid, 0.0), abtube::config_error);
    std::vector<double> short_pattern(p.begin(), p.begin() + 10);
    REQUIRE_THROWS_AS(abtube::fringe_shift(short_pattern, p, kGrid, kTilt),
                      abtube::config_error);
}

TEST_CASE("projection against the prepared mode recovers the x factor", "[fringes]") {
    const SpatialGrid g = abtube::make_grid(128, 64.0, 1);
    const ComplexField fx = abtube::gaussian_packet(g, PacketSpec{-2.0, 2.5, 0.8});
    const ComplexField fy = abtube::gaussian_packet(g, PacketSpec{3.0, 2.0, 0.0});
    const ComplexField prod = abtube::tensor_product(fx, fy);
    const ComplexField back = abtube::project_onto_reference(prod, fy);
    for (int i = 0; i < g.n_points; ++i)
        REQUIRE(std::abs(back.values[i] - fx.values[i]) < 1e-12);
}
