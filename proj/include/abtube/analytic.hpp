#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "abtube/errors.hpp"
#include "abtube/potentials.hpp"

namespace abtube {

using cplx = std::complex<double>;

/// Closed forms for everything the simulator is checked against. Nothing in
/// here touches a grid or a propagator.

struct PhaseResult {
    double delta_phi = 0.0;      // q * integral of U dt (hbar = 1)
    double phase_integral = 0.0; // integral of U dt over the whole pulse
};

/// Phase difference accumulated between the two branches over a full pulse:
/// delta_phi = q * v0 * (t2 - t1).
inline PhaseResult ab_phase(const PulseSchedule& s, double q) {
    if (!s.ordered()) throw config_error("ab_phase: schedule must satisfy t0<t1<t2<t3");
    const double integral = s.v0 * (s.t2 - s.t1);
    return PhaseResult{q * integral, integral};
}

/// exp(-i q * integral_0^t U dt'), the factor carried by branch 2.
inline cplx phase_factor(const PulseSchedule& s, double q, double t) {
    double integral;
    if (t <= s.t1)
        integral = 0.0;
    else if (t >= s.t2)
        integral = s.v0 * (s.t2 - s.t1);
    else
        integral = s.v0 * (t - s.t1);
    return std::polar(1.0, -q * integral);
}

enum class EnergyModel { no_induced, with_induced };

struct BranchEnergies {
    double e1 = 0.0;
    double e2 = 0.0;
    EnergyModel model = EnergyModel::no_induced;
};

/// Energy bookkeeping for one instant with tube voltage u. Without the
/// induced charge, branch 2 sits q*u above branch 1. With it, the external
/// term enters as (q + q_induced)*u, so the physical q_induced = -q makes the
/// branch energies exactly equal.
inline BranchEnergies branch_energies(double ek, double ek_induced, double conf_energy,
                                      double coulomb_energy, double u,
                                      const ChargeConfig& c, EnergyModel model) {
    BranchEnergies out;
    out.model = model;
    if (model == EnergyModel::no_induced) {
        out.e1 = ek;
        out.e2 = ek + c.q * u;
    } else {
        const double base = ek + ek_induced + conf_energy + coulomb_energy;
        out.e1 = base;
        out.e2 = base + (c.q + c.q_induced) * u;
    }
    return out;
}

/// Two-beam pattern for unit-amplitude branches meeting at tilt wavenumber
/// kappa: I(x) = envelope(x) * 2 * (1 + cos(kappa x - delta_phi)). Maxima sit
/// at kappa x = delta_phi mod 2 pi.
inline std::vector<double> predicted_intensity(double delta_phi, double tilt,
                                               const std::vector<double>& x,
                                               const std::function<double(double)>& envelope) {
    if (tilt == 0.0)
        throw config_error("predicted_intensity: tilt must be nonzero (degenerate fringe)");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = envelope(x[i]) * 2.0 * (1.0 + std::cos(tilt * x[i] - delta_phi));
    return out;
}

} // namespace abtube
