#pragma once

// Shared numerical substrate: grids, the dispersion symbol, brackets,
// smooth cutoffs and the discrete Fourier transform contract.
//
// Fourier convention (used everywhere in the library):
//
//   spatial box [-L, L), n nodes x_j = -L + j*dx, dx = 2L/n
//   frequency nodes xi_k = k*dxi, dxi = pi/L, k = -(n-1)/2 .. (n-1)/2
//
//   forward   f^(xi_k) = dx * sum_j f(x_j) exp(-i xi_k x_j)
//   inverse   f(x_j)   = dxi/(2 pi) * sum_k f^(xi_k) exp(+i xi_k x_j)
//
// Coefficients are therefore Riemann samples of the continuum transform
// f^(xi) = int f(x) exp(-i x xi) dx, and discrete Parseval reads
//
//   dx * sum |f_j|^2 = dxi/(2 pi) * sum |f^_k|^2        (exact).
//
// Space-time fields use the same recipe on both axes:
//   F~(tau_j, xi_k) = dt*dx * sum u(t_m, x_l) exp(-i(tau_j t_m + xi_k x_l)).
//
// Coefficient arrays are stored in centred order: storage index i holds
// wavenumber k = i - (n-1)/2.

#include <complex>
#include <span>
#include <vector>

namespace bq {

using complex = std::complex<double>;

/// Japanese bracket <a> = 1 + |a|.
double bracket(double x);

/// Dispersion symbol sqrt(xi^2 + xi^4).
double gamma(double xi);

/// Smooth cutoff: 1 on [-1, 1], 0 outside (-2, 2), C-infinity in between.
double theta(double t);

/// theta(t / T). Throws std::invalid_argument for T <= 0.
double theta_T(double t, double T);

class FrequencyGrid {
public:
    /// `n_modes` must be odd and >= 3; `half_width` positive.
    FrequencyGrid(double half_width, int n_modes);

    double half_width() const { return half_width_; }
    int size() const { return n_; }
    int max_wavenumber() const { return (n_ - 1) / 2; }
    double spacing() const { return dxi_; }
    double dx() const { return 2.0 * half_width_ / n_; }

    /// Frequency at storage index i.
    double node(int i) const { return (i - max_wavenumber()) * dxi_; }
    /// Spatial sample point j.
    double x(int j) const { return -half_width_ + j * dx(); }
    /// Storage index of wavenumber k, or -1 if outside the grid.
    int index_of(int k) const;
    /// Storage index of the grid node nearest to xi (clamped).
    int nearest_index(double xi) const;

    std::vector<double> nodes() const;
    std::vector<double> positions() const;

    bool operator==(const FrequencyGrid& other) const = default;

private:
    double half_width_;
    int n_;
    double dxi_;
};

class SpaceTimeGrid {
public:
    /// Periodic time window [t_min, t_max) with `n_times` samples. `n_times`
    /// must be odd (and >= 5) so that the dual tau nodes are symmetric.
    SpaceTimeGrid(FrequencyGrid space, double t_min, double t_max, int n_times);

    const FrequencyGrid& space() const { return space_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    int n_times() const { return n_t_; }
    double dt() const { return (t_max_ - t_min_) / n_t_; }
    double dtau() const;

    double time(int m) const { return t_min_ + m * dt(); }
    double tau(int j) const { return (j - (n_t_ - 1) / 2) * dtau(); }

    std::vector<double> times() const;
    std::vector<double> taus() const;

    bool operator==(const SpaceTimeGrid& other) const = default;

private:
    FrequencyGrid space_;
    double t_min_;
    double t_max_;
    int n_t_;
};

// --- transforms --------------------------------------------------------
// All transforms throw std::invalid_argument on size mismatch.

/// Spatial samples -> centred spectrum (see convention above).
std::vector<complex> dft_forward(const FrequencyGrid& grid, std::span<const complex> samples);
std::vector<complex> dft_inverse(const FrequencyGrid& grid, std::span<const complex> spectrum);

/// Row-major [n_times][n_modes] arrays: samples u(t_m, x_l) <-> F~(tau_j, xi_k).
std::vector<complex> dft2_forward(const SpaceTimeGrid& grid, std::span<const complex> samples);
std::vector<complex> dft2_inverse(const SpaceTimeGrid& grid, std::span<const complex> spectrum);

/// Inverse transform along the time axis only: F~(tau_j, xi_k) -> u^(t_m, xi_k).
std::vector<complex> dft_time_inverse(const SpaceTimeGrid& grid, std::span<const complex> spectrum);
/// Forward transform along the time axis only: u^(t_m, xi_k) -> F~(tau_j, xi_k).
std::vector<complex> dft_time_forward(const SpaceTimeGrid& grid, std::span<const complex> samples);

} // namespace bq
