#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "abtube/potentials.hpp"

using abtube::ChargeConfig;
using abtube::ConfinementSpec;
using abtube::PulseSchedule;

namespace {
const PulseSchedule kPulse{0.0, 2.0, 6.0, 8.0, 2.0};
}

TEST_CASE("shutter voltage is the closed pulse of the schedule", "[potentials]") {
    REQUIRE(abtube::shutter_voltage(0.5 * (kPulse.t0 + kPulse.t1), kPulse) == 0.0);
    REQUIRE(abtube::shutter_voltage(0.5 * (kPulse.t1 + kPulse.t2), kPulse) == kPulse.v0);
    REQUIRE(abtube::shutter_voltage(kPulse.t3, kPulse) == 0.0);
    // Closed at both switch instants.
    REQUIRE(abtube::shutter_voltage(kPulse.t1, kPulse) == kPulse.v0);
    REQUIRE(abtube::shutter_voltage(kPulse.t2, kPulse) == kPulse.v0);
}

TEST_CASE("shutter integral is exact over any covering interval", "[potentials]") {
    const double expected = kPulse.v0 * (kPulse.t2 - kPulse.t1);
    REQUIRE(abtube::shutter_integral(kPulse, kPulse.t0, kPulse.t3) == expected);
    REQUIRE(abtube::shutter_integral(kPulse, -100.0, 100.0) == expected);
    REQUIRE(abtube::shutter_integral(kPulse, kPulse.t1, 4.0) == kPulse.v0 * 2.0);
    REQUIRE(abtube::shutter_integral(kPulse, kPulse.t2, kPulse.t3) == 0.0);
}

TEST_CASE("confinement walls: flat inside, half height at a wall, full outside",
          "[potentials]") {
    const ConfinementSpec c{-6.0, 6.0, 40.0, 0.4}; // steepness << wall separation
    REQUIRE(abtube::confinement(0.0, c) < 1e-6 * c.wall_height);
    REQUIRE(std::abs(abtube::confinement(c.wall_center_high, c) - 0.5 * c.wall_height) <
            1e-11);
    REQUIRE(std::abs(abtube::confinement(c.wall_center_high + 20.0 * c.wall_steepness, c) -
                     c.wall_height) < 1e-6 * c.wall_height);
}

TEST_CASE("soft coulomb kernel values and symmetry", "[potentials]") {
    ChargeConfig attract = abtube::physical_charges(1.0);
    attract.softening = 1.0;
    REQUIRE(abtube::soft_coulomb(3.0, 3.0, attract) == -1.0);

    ChargeConfig neutral = attract;
    neutral.q_induced = 0.0;
    REQUIRE(abtube::soft_coulomb(1.0, 7.0, neutral) == 0.0);

    ChargeConfig repel = attract;
    repel.q_induced = 1.0;
    repel.softening = 4.0;
    REQUIRE(abtube::soft_coulomb(5.0, 2.0, repel) == 0.2); // 1/sqrt(9+16)

    ChargeConfig squared = repel;
    squared.coulomb_exponent = 2;
    REQUIRE(abtube::soft_coulomb(5.0, 2.0, squared) == 0.04); // 1/(9+16)

    // Symmetric in x <-> y, and the minimum over x sits at x = y.
    for (double d : {0.3, 1.7, 4.2}) {
        REQUIRE(abtube::soft_coulomb(1.0 + d, 1.0, attract) ==
                abtube::soft_coulomb(1.0, 1.0 + d, attract));
        REQUIRE(abtube::soft_coulomb(1.0 + d, 1.0, attract) ==
                abtube::soft_coulomb(1.0 - d, 1.0, attract));
        REQUIRE(abtube::soft_coulomb(1.0, 1.0, attract) <
                abtube::soft_coulomb(1.0 + d, 1.0, attract));
    }
}

TEST_CASE("single-particle branch potentials follow the shutter", "[potentials]") {
    const ChargeConfig c = abtube::physical_charges(1.0);
    for (double t : {0.5, 3.0, 7.5})
        REQUIRE(abtube::branch_potential_single(1.0, t, 1, kPulse, c) == 0.0);
    REQUIRE(abtube::branch_potential_single(0.0, 4.0, 2, kPulse, c) == 2.0);
    REQUIRE(abtube::branch_potential_single(0.0, 1.0, 2, kPulse, c) == 0.0);
    REQUIRE_THROWS_AS(abtube::branch_potential_single(0.0, 1.0, 3, kPulse, c),
                      abtube::config_error);
}

TEST_CASE("pair potential cancels the external term exactly for q_induced = -q",
          "[potentials]") {
    const ConfinementSpec conf{-6.0, 6.0, 40.0, 0.4};
    const ChargeConfig physical = abtube::physical_charges(1.0, 1.0, 1.0, 2.5);
    const std::vector<double> xs{-4.0, -1.3, 0.0, 2.7, 5.9};
    const std::vector<double> ts{1.0, 3.0, 4.0, 7.0};

    for (double x : xs)
        for (double y : xs)
            for (double t : ts) {
                const double off = abtube::branch_potential_pair(x, y, t, 2, kPulse,
                                                                 physical, conf, false);
                const double on = abtube::branch_potential_pair(x, y, t, 2, kPulse,
                                                                physical, conf, true);
                REQUIRE(on == off); // bitwise: the charge sum folds to zero first

                // Branch 1 never carries the external term.
                REQUIRE(abtube::branch_potential_pair(x, y, t, 1, kPulse, physical, conf,
                                                      true) ==
                        abtube::branch_potential_pair(x, y, t, 1, kPulse, physical, conf,
                                                      false));
            }
}

TEST_CASE("pair potential is bitwise independent of v0 when charges cancel",
          "[potentials]") {
    const ConfinementSpec conf{-6.0, 6.0, 40.0, 0.4};
    const ChargeConfig physical = abtube::physical_charges(1.0, 1.0, 1.0, 2.5);
    const double reference =
        abtube::branch_potential_pair(1.0, -2.0, 4.0, 2, kPulse, physical, conf, true);
    for (double v0 : {0.0, 1.0, 10.0, 100.0}) {
        PulseSchedule s = kPulse;
        s.v0 = v0;
        REQUIRE(abtube::branch_potential_pair(1.0, -2.0, 4.0, 2, s, physical, conf, true) ==
                reference);
    }
}

TEST_CASE("detuned charges leave the advertised residual coupling", "[potentials]") {
    const ConfinementSpec conf{-6.0, 6.0, 40.0, 0.4};
    const ChargeConfig detuned = abtube::detuned_charges(1.0, 0.01, 1.0, 1.0, 2.5);
    PulseSchedule s = kPulse;
    s.v0 = 1.0;
    const double off =
        abtube::branch_potential_pair(0.5, -0.5, 4.0, 2, s, detuned, conf, false);
    const double on =
        abtube::branch_potential_pair(0.5, -0.5, 4.0, 2, s, detuned, conf, true);
    REQUIRE(std::abs((on - off) - 0.01) < 1e-14);
}

TEST_CASE("charge validation enforces the physical/detuned contract", "[potentials]") {
    ChargeConfig bad = abtube::physical_charges(1.0);
    bad.q_induced = -0.5;
    REQUIRE_THROWS_AS(abtube::validate_charges(bad), abtube::config_error);
    REQUIRE_THROWS_AS(abtube::detuned_charges(1.0, 0.5), abtube::config_error);
    REQUIRE_NOTHROW(abtube::validate_charges(abtube::detuned_charges(1.0, 0.1)));
    ChargeConfig neg_mass = abtube::physical_charges(1.0);
    neg_mass.m_induced = -1.0;
    REQUIRE_THROWS_AS(abtube::validate_charges(neg_mass), abtube::config_error);
}
