#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "abtube/errors.hpp"
#include "abtube/fft.hpp"
#include "abtube/grid.hpp"
#include "abtube/hamiltonian.hpp"

namespace abtube {

struct EvolutionConfig {
    double dt = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    int record_stride = 1;

    bool operator==(const EvolutionConfig&) const = default;
};

struct Trajectory {
    ComplexField final_state;
    std::vector<double> times;
    std::vector<ComplexField> snapshots;
    double max_norm_drift = 0.0;
    long steps = 0;
    bool t_end_padded = false;
    double t_end_actual = 0.0;
};

/// Symmetric split-step propagator: half potential phase, full spectral
/// kinetic phase, half potential phase. Time-dependent potentials are
/// sampled once per step at the interval midpoint t + dt/2 and used for
/// both half phases. All phase factors are unimodular by construction, so
/// the only norm drift is transform round-off.
class Propagator {
public:
    Propagator(SpatialGrid grid, HamiltonianSpec h)
        : grid_(grid), h_(std::move(h)) {
        check_hamiltonian(h_, grid_);
        if (grid_.dims == 1)
            plan1d_ = std::make_unique<FftPlan>(static_cast<std::size_t>(grid_.n_points));
        else
            plan2d_ = std::make_unique<FftPlan2d>(static_cast<std::size_t>(grid_.n_points));
    }

    const SpatialGrid& grid() const { return grid_; }
    const HamiltonianSpec& hamiltonian() const { return h_; }

    /// Advance psi from t to t + dt in place; returns the L2 norm of the
    /// stepped field. Throws blowup_error on non-finite amplitudes.
    double step_in_place(ComplexField& psi, double t, double dt) {
        if (!(psi.grid == grid_))
            throw config_error("Propagator: field grid does not match");
        if (!(dt > 0.0)) throw config_error("Propagator: dt must be positive");
        prepare(dt);

        const cplx* half_phase = nullptr;
        if (h_.time_dependent) {
            detail::sample_potential(h_, grid_, t + 0.5 * dt, potential_scratch_);
            phase_scratch_.resize(potential_scratch_.size());
            for (std::size_t i = 0; i < potential_scratch_.size(); ++i)
                phase_scratch_[i] = std::polar(1.0, -0.5 * dt * potential_scratch_[i]);
            half_phase = phase_scratch_.data();
        } else {
            half_phase = static_phase_.data();
        }

        cplx* v = psi.values.data();
        const std::size_t n = psi.values.size();
        for (std::size_t i = 0; i < n; ++i) v[i] *= half_phase[i];
        if (plan1d_)
            plan1d_->forward(v);
        else
            plan2d_->forward(v);
        for (std::size_t i = 0; i < n; ++i) v[i] *= kinetic_phase_[i];
        if (plan1d_)
            plan1d_->inverse(v);
        else
            plan2d_->inverse(v);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] *= half_phase[i];
            acc += std::norm(v[i]);
        }
        const double norm = std::sqrt(acc * grid_.cell_volume());
        if (!std::isfinite(norm))
            throw blowup_error("non-finite amplitude after step at t = " + std::to_string(t));
        return norm;
    }

private:
    void prepare(double dt) {
        if (dt == prepared_dt_) return;
        const int n = grid_.n_points;
        kinetic_phase_.resize(grid_.size());
        if (grid_.dims == 1) {
            const std::vector<double> kx = detail::kinetic_axis(grid_, h_.masses[0]);
            for (int j = 0; j < n; ++j)
                kinetic_phase_[j] = std::polar(1.0, -dt * kx[j]);
        } else {
            const std::vector<double> kx = detail::kinetic_axis(grid_, h_.masses[0]);
            const std::vector<double> ky = detail::kinetic_axis(grid_, h_.masses[1]);
            for (int jx = 0; jx < n; ++jx)
                for (int jy = 0; jy < n; ++jy)
                    kinetic_phase_[static_cast<std::size_t>(jx) * n + jy] =
                        std::polar(1.0, -dt * (kx[jx] + ky[jy]));
        }
        if (!h_.time_dependent) {
            detail::sample_potential(h_, grid_, 0.0, potential_scratch_);
            static_phase_.resize(potential_scratch_.size());
            for (std::size_t i = 0; i < potential_scratch_.size(); ++i)
                static_phase_[i] = std::polar(1.0, -0.5 * dt * potential_scratch_[i]);
        }
        prepared_dt_ = dt;
    }

    SpatialGrid grid_;
    HamiltonianSpec h_;
    std::unique_ptr<FftPlan> plan1d_;
    std::unique_ptr<FftPlan2d> plan2d_;
    double prepared_dt_ = -1.0;
    std::vector<cplx> kinetic_phase_;
    std::vector<cplx> static_phase_;
    std::vector<cplx> phase_scratch_;
    std::vector<double> potential_scratch_;
};

/// One Strang step as a pure function.
inline ComplexField step(const ComplexField& psi, const HamiltonianSpec& h, double t,
                         double dt) {
    Propagator prop(psi.grid, h);
    ComplexField out = psi;
    prop.step_in_place(out, t, dt);
    return out;
}

/// Number of steps covering [t_start, t_end]; pads the end up to a whole
/// step when the span is not an exact multiple of dt.
inline long evolution_steps(const EvolutionConfig& cfg, bool& padded) {
    if (!(cfg.dt > 0.0)) throw config_error("evolve: dt must be positive");
    if (cfg.t_end < cfg.t_start) throw config_error("evolve: t_end before t_start");
    const double span = cfg.t_end - cfg.t_start;
    const double exact = span / cfg.dt;
    long steps = static_cast<long>(std::ceil(exact - 1e-9));
    if (steps < 0) steps = 0;
    padded = std::abs(steps * cfg.dt - span) > 1e-9 * std::max(1.0, std::abs(span));
    return steps;
}

inline Trajectory evolve(const ComplexField& psi0, const HamiltonianSpec& h,
                         const EvolutionConfig& cfg) {
    if (cfg.record_stride < 1) throw config_error("evolve: record_stride must be >= 1");
    bool padded = false;
    const long steps = evolution_steps(cfg, padded);

    Trajectory traj;
    traj.steps = steps;
    traj.t_end_padded = padded;
    traj.t_end_actual = cfg.t_start + steps * cfg.dt;

    ComplexField psi = psi0;
    Propagator prop(psi.grid, h);
    traj.snapshots.push_back(psi);
    traj.times.push_back(cfg.t_start);
    for (long k = 0; k < steps; ++k) {
        const double t = cfg.t_start + k * cfg.dt;
        double norm;
        try {
            norm = prop.step_in_place(psi, t, cfg.dt);
        } catch (const blowup_error& e) {
            throw blowup_error(std::string(e.what()) + " (step " + std::to_string(k) + ")",
                               k);
        }
        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(norm - 1.0));
        if ((k + 1) % cfg.record_stride == 0 && k + 1 < steps) {
            traj.snapshots.push_back(psi);
            traj.times.push_back(cfg.t_start + (k + 1) * cfg.dt);
        }
    }
    if (steps > 0) {
        traj.snapshots.push_back(psi);
        traj.times.push_back(traj.t_end_actual);
    }
    traj.final_state = std::move(psi);
    return traj;
}

} // namespace abtube
