#pragma once

// Field containers and the Sobolev / Bourgain norms.
//
// Norms are discrete L^2 sums with plain Riemann weights dxi (and dtau*dxi
// in space-time), with no 1/(2 pi) factor: hs_norm approximates
// ||<xi>^s f^||_{L^2(R)} directly on the coefficient samples.

#include "bqlab/spectral.hpp"

#include <span>
#include <vector>

namespace bq {

struct SpectralField {
    FrequencyGrid grid;
    std::vector<complex> coeffs;

    /// Zero field on `grid`.
    explicit SpectralField(FrequencyGrid g);
    /// Throws std::invalid_argument on size mismatch or non-finite values.
    SpectralField(FrequencyGrid g, std::vector<complex> c);

    complex& operator[](int i) { return coeffs[i]; }
    complex operator[](int i) const { return coeffs[i]; }
};

/// Coefficients u~(tau_j, xi_k), row-major [n_times][n_modes].
struct SpaceTimeField {
    SpaceTimeGrid grid;
    std::vector<complex> coeffs;

    explicit SpaceTimeField(SpaceTimeGrid g);
    SpaceTimeField(SpaceTimeGrid g, std::vector<complex> c);

    complex& at(int j, int k) { return coeffs[static_cast<std::size_t>(j) * grid.space().size() + k]; }
    complex at(int j, int k) const
    {
        return coeffs[static_cast<std::size_t>(j) * grid.space().size() + k];
    }
};

/// The field sampled from a function of xi at every grid node.
template <class F>
SpectralField sample_spectrum(const FrequencyGrid& grid, F&& f)
{
    SpectralField out(grid);
    for (int i = 0; i < grid.size(); ++i) out[i] = f(grid.node(i));
    return out;
}

double hs_norm(const FrequencyGrid& grid, std::span<const complex> coeffs, double s);
double hs_norm(const SpectralField& f, double s);

double xsb_norm(const SpaceTimeField& F, double s, double b);
/// Same with the modulation |tau| - gamma(xi) replaced by |tau| - xi^2.
double xsb_norm_schrodinger(const SpaceTimeField& F, double s, double b);

/// <|tau| - xi^2> / <|tau| - gamma(xi)>; lies in [2/3, 3/2].
double modulation_weight_ratio(double tau, double xi);

/// max_m hs_norm(u(t_m), s) / xsb_norm(F, s, b) where u is the time-inverse
/// transform of F. Zero field gives 0. Throws for b <= 1/2.
double embedding_ratio(const SpaceTimeField& F, double s, double b);

} // namespace bq
