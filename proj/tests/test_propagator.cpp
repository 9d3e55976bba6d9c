#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "abtube/grid.hpp"
#include "abtube/probes.hpp"
#include "abtube/propagator.hpp"
#include "test_oracles.hpp"

using abtube::ComplexField;
using abtube::cplx;
using abtube::EvolutionConfig;
using abtube::HamiltonianSpec;
using abtube::PacketSpec;
using abtube::SpatialGrid;

namespace {

double sup_diff(const ComplexField& a, const ComplexField& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        sup = std::max(sup, std::abs(a.values[i] - b.values[i]));
    return sup;
}

} // namespace

TEST_CASE("a commensurate plane wave is a kinetic eigenstate of one step", "[propagator]") {
    const SpatialGrid g = abtube::make_grid(256, 32.0, 1);
    const double k0 = 4.0 * g.momentum_spacing();
    ComplexField plane{g, std::vector<cplx>(g.size())};
    const double amp = 1.0 / std::sqrt(g.length);
    for (int i = 0; i < g.n_points; ++i)
        plane.values[i] = std::polar(amp, k0 * g.coord(i));

    const double dt = 0.05;
    const ComplexField stepped = abtube::step(plane, abtube::free_hamiltonian(1.0), 0.0, dt);
    const cplx expected_phase = std::polar(1.0, -0.5 * k0 * k0 * dt);
    for (std::size_t i = 0; i < plane.values.size(); ++i)
        REQUIRE(std::abs(stepped.values[i] - expected_phase * plane.values[i]) < 1e-12);
}

TEST_CASE("a constant potential only adds the global phase exp(-i c dt)", "[propagator]") {
    const SpatialGrid g = abtube::make_grid(256, 32.0, 1);
    const ComplexField psi = abtube::gaussian_packet(g, PacketSpec{0.0, 1.5, 1.0});
    const double c = 0.7, dt = 0.04;

    const ComplexField free_step = abtube::step(psi, abtube::free_hamiltonian(1.0), 0.0, dt);
    const ComplexField const_step = abtube::step(
        psi, abtube::static_hamiltonian({1.0}, [c](double, double) { return c; }), 0.0, dt);

    const cplx phase = std::polar(1.0, -c * dt);
    REQUIRE(sup_diff(const_step, ComplexField{g, [&] {
                         std::vector<cplx> v = free_step.values;
                         for (cplx& z : v) z *= phase;
                         return v;
                     }()}) < 1e-13);
}

TEST_CASE("harmonic ground state picks up exp(-i omega dt / 2) to O(dt^3)",
          "[propagator]") {
    const SpatialGrid g = abtube::make_grid(256, 32.0, 1);
    const double omega = 1.0;
    const double sigma = 1.0 / std::sqrt(2.0 * omega); // sigma^2 = 1/(2 omega)
    const ComplexField psi0 = abtube::gaussian_packet(g, PacketSpec{0.0, sigma, 0.0});
    const HamiltonianSpec h = abtube::static_hamiltonian(
        {1.0}, [omega](double x, double) { return 0.5 * omega * omega * x * x; });

    const auto one_step_error = [&](double dt) {
        const ComplexField stepped = abtube::step(psi0, h, 0.0, dt);
        const cplx phase = std::polar(1.0, -0.5 * omega * dt);
        double err = 0.0;
        for (std::size_t i = 0; i < psi0.values.size(); ++i)
            err = std::max(err, std::abs(stepped.values[i] - phase * psi0.values[i]));
        return err;
    };

    const double e1 = one_step_error(0.1);
    const double e2 = one_step_error(0.05);
    REQUIRE(e1 < 1e-4);
    const double ratio = e1 / e2; // third-order local error: ratio ~ 8
    REQUIRE(ratio > 6.0);
    REQUIRE(ratio < 10.0);
}

TEST_CASE("free Gaussian dispersion matches the closed form to 0.1%", "[propagator]") {
    const SpatialGrid g = abtube::make_grid(512, 64.0, 1);
    const double sigma0 = 1.0, mass = 1.0, T = 4.0;
    const ComplexField psi0 = abtube::gaussian_packet(g, PacketSpec{0.0, sigma0, 0.0});

    EvolutionConfig cfg{0.01, 0.0, T, 100};
    const abtube::Trajectory traj = abtube::evolve(psi0, abtube::free_hamiltonian(mass), cfg);

    const double measured = std::sqrt(abtube::position_variance(traj.final_state));
    const double expected = oracles::dispersed_width(sigma0, mass, T);
    REQUIRE(std::abs(measured - expected) < 1e-3 * expected);
    REQUIRE(traj.max_norm_drift < 1e-12);
    REQUIRE_FALSE(traj.t_end_padded);
}

TEST_CASE("halving dt shrinks the final-state difference about fourfold", "[propagator]") {
    const SpatialGrid g = abtube::make_grid(256, 32.0, 1);
    const ComplexField psi0 = abtube::gaussian_packet(g, PacketSpec{2.0, 1.0, 0.0});
    const HamiltonianSpec h =
        abtube::static_hamiltonian({1.0}, [](double x, double) { return 0.5 * x * x; });

    const auto final_at = [&](double dt, long steps) {
        ComplexField psi = psi0;
        abtube::Propagator prop(g, h);
        for (long k = 0; k < steps; ++k) prop.step_in_place(psi, k * dt, dt);
        return psi;
    };

    const ComplexField a = final_at(0.05, 20);
    const ComplexField b = final_at(0.025, 40);
    const ComplexField c = final_at(0.0125, 80);
    const double d1 = sup_diff(a, b);
    const double d2 = sup_diff(b, c);
    REQUIRE(d1 / d2 > 3.4);
    REQUIRE(d1 / d2 < 4.6);
}

TEST_CASE("zero-duration evolution returns the input unchanged", "[propagator]") {
    const SpatialGrid g = abtube::make_grid(256, 32.0, 1);
    const ComplexField psi0 = abtube::gaussian_packet(g, PacketSpec{1.0, 1.5, 0.4});
    EvolutionConfig cfg{0.01, 2.0, 2.0, 1};
    const abtube::Trajectory traj = abtube::evolve(psi0, abtube::free_hamiltonian(1.0), cfg);
    REQUIRE(traj.steps == 0);
    REQUIRE(traj.final_state.values == psi0.values);
}

TEST_CASE("evolve pads a non-integral span and reports it", "[propagator]") {
    const SpatialGrid g = abtube::make_grid(256, 32.0, 1);
    const ComplexField psi0 = abtube::gaussian_packet(g, PacketSpec{0.0, 1.5, 0.0});
    EvolutionConfig cfg{0.4, 0.0, 1.0, 1};
    const abtube::Trajectory traj = abtube::evolve(psi0, abtube::free_hamiltonian(1.0), cfg);
    REQUIRE(traj.steps == 3);
    REQUIRE(traj.t_end_padded);
    REQUIRE(traj.t_end_actual == Catch::Approx(1.2));
    REQUIRE(traj.snapshots.size() == static_cast<std::size_t>(traj.steps) + 1);
}

TEST_CASE("a non-finite potential raises a blowup error", "[propagator]") {
    const SpatialGrid g = abtube::make_grid(256, 32.0, 1);
    const ComplexField psi0 = abtube::gaussian_packet(g, PacketSpec{0.0, 1.5, 0.0});
    const HamiltonianSpec sick = abtube::static_hamiltonian({1.0}, [](double x, double) {
        return x == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    });
    EvolutionConfig cfg{0.01, 0.0, 0.1, 1};
    REQUIRE_THROWS_AS(abtube::evolve(psi0, sick, cfg), abtube::blowup_error);
}

TEST_CASE("norm drift probe stays below 1e-10 over ten thousand steps", "[propagator]") {
    const abtube::ProbeResult r = abtube::norm_drift_probe(0.01);
    INFO(r.detail);
    REQUIRE(r.value < 1e-10);
    REQUIRE(r.passed);
}

TEST_CASE("convergence probe measures second order, and fails for huge dt",
          "[propagator]") {
    const abtube::ProbeResult good = abtube::convergence_order_probe(0.02);
    INFO("slope " << good.value);
    REQUIRE(std::abs(good.value - 2.0) <= 0.2);
    REQUIRE(good.passed);

    const abtube::ProbeResult bad = abtube::convergence_order_probe(2.0);
    INFO("slope " << bad.value);
    REQUIRE_FALSE(bad.passed);
}

TEST_CASE("uniform time-dependent potential is a pure global phase", "[propagator]") {
    const abtube::ProbeResult r = abtube::gauge_invariance_probe(0.01);
    INFO(r.detail);
    REQUIRE(r.value < 1e-10);
    REQUIRE(r.passed);
}
