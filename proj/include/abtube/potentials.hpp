#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "abtube/errors.hpp"

namespace abtube {

/// Tube-2 voltage record: 0 before t1, v0 on the closed interval [t1, t2],
/// 0 after t2. The packet is inside the tubes from t0 to t3.
struct PulseSchedule {
    double t0 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    double v0 = 0.0;

    bool ordered() const { return t0 < t1 && t1 < t2 && t2 < t3; }

    bool operator==(const PulseSchedule&) const = default;
};

inline double shutter_voltage(double t, const PulseSchedule& s) {
    return (t >= s.t1 && t <= s.t2) ? s.v0 : 0.0;
}

/// Exact integral of the shutter voltage over [ta, tb] (piecewise-constant
/// closed form, no quadrature).
inline double shutter_integral(const PulseSchedule& s, double ta, double tb) {
    const double lo = std::max(ta, s.t1);
    const double hi = std::min(tb, s.t2);
    return hi > lo ? s.v0 * (hi - lo) : 0.0;
}

/// Moving charge q plus the single effective particle standing in for the
/// image charge on the tube's inner surface. Physical mode pins
/// q_induced = -q; detuned mode offsets it by a flagged fraction epsilon.
struct ChargeConfig {
    double q = 1.0;
    double q_induced = -1.0;
    double m = 1.0;
    double m_induced = 1.0;
    double softening = 1.0;   // soft-core length a
    int coulomb_exponent = 1; // 1: 1/sqrt(r^2+a^2), 2: 1/(r^2+a^2)
    bool detuned = false;

    bool operator==(const ChargeConfig&) const = default;
};

inline ChargeConfig physical_charges(double q, double m = 1.0, double m_induced = 1.0,
                                     double softening = 1.0, int coulomb_exponent = 1) {
    return ChargeConfig{q, -q, m, m_induced, softening, coulomb_exponent, false};
}

/// q_induced = -q (1 - epsilon); |epsilon| <= 0.1 by contract.
inline ChargeConfig detuned_charges(double q, double epsilon, double m = 1.0,
                                    double m_induced = 1.0, double softening = 1.0,
                                    int coulomb_exponent = 1) {
    if (std::abs(epsilon) > 0.1)
        throw config_error("detuned_charges: |epsilon| must be <= 0.1, got " +
                           std::to_string(epsilon));
    return ChargeConfig{q, -q * (1.0 - epsilon), m, m_induced, softening,
                        coulomb_exponent, true};
}

inline void validate_charges(const ChargeConfig& c) {
    if (!(c.m > 0.0) || !(c.m_induced > 0.0))
        throw config_error("charges: masses must be positive");
    if (!(c.softening > 0.0))
        throw config_error("charges: softening must be positive");
    if (c.coulomb_exponent != 1 && c.coulomb_exponent != 2)
        throw config_error("charges: coulomb_exponent must be 1 or 2");
    if (!c.detuned && c.q_induced != -c.q)
        throw config_error("charges: physical mode requires q_induced == -q; "
                           "use the detuning field for offsets");
    if (c.detuned && c.q != 0.0) {
        const double eps = 1.0 + c.q_induced / c.q;
        if (std::abs(eps) > 0.1 + 1e-15)
            throw config_error("charges: detuning must satisfy |epsilon| <= 0.1");
    }
}

/// Smooth double-wall trap holding the induced particle inside the metal:
/// ~0 well inside the walls, ~wall_height far outside. Independent of the
/// tube voltage by construction.
struct ConfinementSpec {
    double wall_center_low = -1.0;
    double wall_center_high = 1.0;
    double wall_height = 1.0;
    double wall_steepness = 0.1;

    bool operator==(const ConfinementSpec&) const = default;
};

inline double confinement(double y, const ConfinementSpec& c) {
    const auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    return c.wall_height * (sigmoid((c.wall_center_low - y) / c.wall_steepness) +
                            sigmoid((y - c.wall_center_high) / c.wall_steepness));
}

/// Regularized interaction between q and q_induced; exponent selects the
/// kernel power (both selectable for sensitivity checks).
inline double soft_coulomb(double x, double y, const ChargeConfig& c) {
    const double d2 = (x - y) * (x - y) + c.softening * c.softening;
    const double qq = c.q * c.q_induced;
    return c.coulomb_exponent == 2 ? qq / d2 : qq / std::sqrt(d2);
}

/// Single-particle branch term: tube 1 is grounded, tube 2 carries q*U(t),
/// spatially uniform across the tube interior.
inline double branch_potential_single(double /*x*/, double t, int branch,
                                      const PulseSchedule& s, const ChargeConfig& c) {
    if (branch != 1 && branch != 2)
        throw config_error("branch_potential_single: branch must be 1 or 2");
    if (branch == 1) return 0.0;
    return c.q * shutter_voltage(t, s);
}

/// Two-particle branch term: confinement + soft Coulomb, plus the external
/// term (q + q_induced) * U(t) on branch 2 when the generator is on. The
/// charge sum is folded before multiplying by U, so q_induced == -q cancels
/// the external term exactly in floating point.
inline double branch_potential_pair(double x, double y, double t, int branch,
                                    const PulseSchedule& s, const ChargeConfig& c,
                                    const ConfinementSpec& conf, bool external_on) {
    if (branch != 1 && branch != 2)
        throw config_error("branch_potential_pair: branch must be 1 or 2");
    double v = confinement(y, conf) + soft_coulomb(x, y, c);
    if (branch == 2 && external_on) v += (c.q + c.q_induced) * shutter_voltage(t, s);
    return v;
}

} // namespace abtube
