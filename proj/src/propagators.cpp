#include "bqlab/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bq {

InitialData::InitialData(SpectralField phi, SpectralField psi)
    : phi_hat(std::move(phi)), psi_hat(std::move(psi))
{
    if (!(phi_hat.grid == psi_hat.grid))
        throw std::invalid_argument("InitialData: phi and psi must share one grid");
}

InitialData::InitialData(const FrequencyGrid& grid) : phi_hat(grid), psi_hat(grid) {}

std::vector<complex> InitialData::velocity() const
{
    const auto& g = grid();
    std::vector<complex> out(g.size());
    for (int i = 0; i < g.size(); ++i) out[i] = complex(0.0, g.node(i)) * psi_hat[i];
    return out;
}

double vs_multiplier(double t, double xi)
{
    const double g = gamma(xi);
    if (g < 1e-8) return t - t * t * t * g * g / 6.0;
    return std::sin(t * g) / g;
}

SpectralField vc_apply(const SpectralField& f, double t)
{
    SpectralField out(f.grid);
    for (int i = 0; i < f.grid.size(); ++i) out[i] = std::cos(t * gamma(f.grid.node(i))) * f[i];
    return out;
}

SpectralField vs_apply(const SpectralField& g, double t)
{
    SpectralField out(g.grid);
    for (int i = 0; i < g.grid.size(); ++i) out[i] = vs_multiplier(t, g.grid.node(i)) * g[i];
    return out;
}

LinearState propagate(const FrequencyGrid& grid, const LinearState& state, double t)
{
    const auto n = static_cast<std::size_t>(grid.size());
    if (state.u.size() != n || state.v.size() != n)
        throw std::invalid_argument("propagate: state does not match grid");
    LinearState out{std::vector<complex>(n), std::vector<complex>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = grid.node(static_cast<int>(i));
        const double g = gamma(xi);
        const double c = std::cos(t * g);
        out.u[i] = c * state.u[i] + vs_multiplier(t, xi) * state.v[i];
        out.v[i] = -g * std::sin(t * g) * state.u[i] + c * state.v[i];
    }
    return out;
}

LinearTrajectory linear_solve(const FrequencyGrid& grid, const LinearState& state,
                              std::span<const double> times)
{
    LinearTrajectory traj{grid, {times.begin(), times.end()}, {}, {}};
    traj.states.reserve(times.size());
    traj.velocities.reserve(times.size());
    for (double t : times) {
        auto s = propagate(grid, state, t);
        traj.states.push_back(std::move(s.u));
        traj.velocities.push_back(std::move(s.v));
    }
    return traj;
}

LinearTrajectory linear_solve(const InitialData& data, std::span<const double> times)
{
    return linear_solve(data.grid(), LinearState{data.phi_hat.coeffs, data.velocity()}, times);
}

double mode_energy(complex u, complex ut, double xi)
{
    if (xi == 0.0) throw std::invalid_argument("mode_energy: undefined at xi = 0");
    return std::norm(u) + std::norm(ut / gamma(xi));
}

double energy_drift(const LinearTrajectory& traj)
{
    const FrequencyGrid& g = traj.grid;
    if (traj.states.empty()) return 0.0;
    const int zero = g.index_of(0);
    std::vector<double> e0(g.size(), 0.0);
    double peak = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        if (k == zero) continue;
        e0[k] = mode_energy(traj.states[0][k], traj.velocities[0][k], g.node(k));
        peak = std::max(peak, e0[k]);
    }
    const double floor = 1e-30 * peak;
    double drift = 0.0;
    for (std::size_t m = 0; m < traj.states.size(); ++m)
        for (int k = 0; k < g.size(); ++k) {
            if (k == zero) continue;
            const double e = mode_energy(traj.states[m][k], traj.velocities[m][k], g.node(k));
            const double denom = std::max(e0[k], floor);
            if (denom > 0.0) drift = std::max(drift, std::abs(e - e0[k]) / denom);
        }
    return drift;
}

} // namespace bq
