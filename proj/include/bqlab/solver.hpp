#pragma once

// Picard iteration for the Duhamel form of
//   u_tt - u_xx + u_xxxx + (u^2)_xx = 0,
// i.e. per mode u^'' + gamma^2 u^ = xi^2 (u^2)^ = -N(u) with
// N(u) = -xi^2 (u^2)^. The integral equation solved on [0, T] is
//   u(t) = V_c(t) phi + V_s(t) psi_x - int_0^t V_s(t - t') N(u(t')) dt'.

#include "bqlab/propagators.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bq {

class non_convergence : public std::runtime_error {
public:
    non_convergence(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history))
    {
    }
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

struct DuhamelQuadrature {
    int panels = 4; // minimum; more are added so each panel spans <= 4 radians
    int order = 16;
};

struct SolverConfig {
    double s = 0.0;
    double a = 0.45;
    double b = 0.55;
    double T = 0.5;
    int n_times = 32; // Chebyshev-Lobatto nodes on [0, T]
    DuhamelQuadrature quadrature{};
    int max_iterations = 60;
    double tolerance = 1e-13;
    bool dealias = true;
    // X_{s,b} diagnostics over the window [-2, 2] * max(T, 1)
    bool xsb_diagnostics = true;
    int diagnostic_n_times = 255;
};

/// Admissibility diagnostics; empty iff the configuration is usable.
std::vector<std::string> validate(const SolverConfig& config);

struct SolutionTrajectory {
    explicit SolutionTrajectory(FrequencyGrid g) : grid(g) {}

    FrequencyGrid grid;
    std::vector<double> times;
    std::vector<std::vector<complex>> states;     // [time][mode]
    std::vector<std::vector<complex>> velocities; // filled by reference_solve only

    // Picard bookkeeping
    std::vector<double> differences; // relative sup_t H^s iterate differences
    std::vector<double> ratios;      // successive difference quotients
    double fitted_ratio = 0.0;
    int iterations = 0;
    bool converged = false;

    double T = 0.0;
    double data_norm = 0.0;  // ||phi||_{H^s} + ||psi||_{H^{s-1}}
    double c_linear = 0.0;   // ||theta * linear part||_X / data_norm
    double c_bilinear = 0.0; // ||theta_T * Duhamel(first iterate)||_X / (T^delta ||u_1||_X^2)
    double radius = 0.0;     // d = 2 c_linear (||phi|| + ||psi||)
    bool contraction_condition = false; // 4 c_bilinear d T^delta < 1
    double solution_xsb = 0.0;

    // dense output data
    LinearState initial;
    std::vector<complex> forcing; // N(u) at `times`, [time][mode] flattened
    DuhamelQuadrature quadrature{};

    /// Solution at any t in [0, T] (picard) via the stored forcing history.
    std::vector<complex> evaluate_at(double t) const;
};

/// -xi^2 (u^2)^ computed pseudospectrally, optionally with 2/3-rule padding.
SpectralField nonlinearity_spectrum(const SpectralField& u, bool dealias = true);

/// Per mode, int_0^t sin((t - t') gamma)/gamma F(t') dt' with F given at
/// `nodes` (ascending, nodes.front() <= 0 <= t <= nodes.back()) and
/// interpolated by a single polynomial through all nodes. `history` is
/// [node][mode].
SpectralField duhamel_apply(const FrequencyGrid& grid, std::span<const double> nodes,
                            const std::vector<std::vector<complex>>& history, double t,
                            const DuhamelQuadrature& quad = {});

SolutionTrajectory picard_solve(const InitialData& data, const SolverConfig& config);

struct ReferenceOptions {
    bool nonlinear = true;
    bool dealias = true;
    double blowup_bound = 1e6; // L^2 norm beyond which the run is declared unstable
};

/// Classical RK4 on (u^, v^) with n_steps uniform steps on [0, T].
SolutionTrajectory reference_solve(const InitialData& data, double T, int n_steps,
                                   const ReferenceOptions& options = {});

/// sup_t ||u1 - u2||_{H^s} / (||phi1 - phi2||_{H^s}^2 + ||psi1 - psi2||_{H^{s-1}}^2)^{1/2}.
double lipschitz_probe(const InitialData& data1, const InitialData& data2,
                       const SolverConfig& config);

/// Minimum over `sample_count` random signals g of the fitted exponent of
/// ||theta_T(t) int_0^t g||_{H^b} / ||g||_{H^{b'}} against T = 2^-1 .. 2^-6.
/// Requires -1/2 < b' <= 0 <= b <= b' + 1.
double time_localization_exponent(double b, double b_prime, int sample_count,
                                  std::uint64_t seed = 1);

} // namespace bq
