#pragma once

// Linear group of u_tt - u_xx + u_xxxx = 0, mode by mode:
//   u^(t) = cos(t gamma) u^(0) + sin(t gamma)/gamma * v^(0)
//   v^(t) = -gamma sin(t gamma) u^(0) + cos(t gamma) v^(0)
// with v = du/dt. Data (phi, psi) enter as u(0) = phi, u_t(0) = psi_x.

#include "bqlab/fields.hpp"

#include <span>
#include <vector>

namespace bq {

struct InitialData {
    SpectralField phi_hat;
    SpectralField psi_hat;

    /// Throws std::invalid_argument if the two fields live on different grids.
    InitialData(SpectralField phi, SpectralField psi);
    /// Zero data on `grid`.
    explicit InitialData(const FrequencyGrid& grid);

    const FrequencyGrid& grid() const { return phi_hat.grid; }
    /// Spectrum of u_t(0) = psi_x, i.e. i xi psi^.
    std::vector<complex> velocity() const;
};

/// Per-mode (u^, u^_t) pair.
struct LinearState {
    std::vector<complex> u;
    std::vector<complex> v;
};

struct LinearTrajectory {
    FrequencyGrid grid;
    std::vector<double> times;
    std::vector<std::vector<complex>> states;     // [time][mode]
    std::vector<std::vector<complex>> velocities; // [time][mode]
};

/// sin(t gamma(xi)) / gamma(xi), continuous through gamma = 0.
double vs_multiplier(double t, double xi);

SpectralField vc_apply(const SpectralField& f, double t);
SpectralField vs_apply(const SpectralField& g, double t);

/// Evolve a state by time t (t may be negative).
LinearState propagate(const FrequencyGrid& grid, const LinearState& state, double t);

LinearTrajectory linear_solve(const InitialData& data, std::span<const double> times);
LinearTrajectory linear_solve(const FrequencyGrid& grid, const LinearState& state,
                              std::span<const double> times);

/// |u|^2 + |u_t / gamma(xi)|^2. Throws std::invalid_argument for xi = 0.
double mode_energy(complex u, complex ut, double xi);

/// max over times and modes xi != 0 of |E_k(t) - E_k(0)| / max(E_k(0), 1e-30 max_k E_k(0)),
/// the per-mode energy drift with a floor for modes that carry no energy.
double energy_drift(const LinearTrajectory& traj);

} // namespace bq
