#pragma once

// Numerical oracles for the bilinear-estimate calculus: the two calculus
// inequalities, the symbol equivalence, the frequency weight bound and the
// region-restricted suprema J1, J2 (case I) and K1, K2, K3 (case III).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bq::est {

/// int dx / (<x - alpha>^p <x - beta>^q). Requires p, q > 0 and p + q > 1.
double ci1_value(double alpha, double beta, double p, double q);
/// min{p, q, p + q - 1}
double ci1_exponent(double p, double q);

/// int dx / <a0 + a1 x + a2 x^2>^q. Requires q > 1/2 and a2 != 0.
double ci2_value(double a0, double a1, double a2, double q);

struct RatioRange {
    double min = 0.0;
    double max = 0.0;
};

/// (1 + |x - y|) / (1 + |x - sqrt(y^2 + y)|)
double symbol_equiv_ratio(double x, double y);
/// Extrema of symbol_equiv_ratio over the n x n grid [0, x_max] x [0, y_max].
RatioRange symbol_equiv_sup(double x_max, double y_max, int n);

/// Exponent of the frequency weight bound: 0 for s >= 0, 4|s| for s < 0.
double weight_exponent(double s);
/// <xi>^{2s} / (<xi1>^{2s} <xi - xi1>^{2s})
double weight_ratio(double s, double xi, double xi1);

/// <xi>^{s'} <= <xi>^s <xi1>^{s'-s} + <xi>^s <xi - xi1>^{s'-s}. Requires s' > s.
bool corollary_split_check(double s, double s_prime, double xi, double xi1);

enum class Case { I, III };
enum class Region { A1, A2, A31, A32, B1, B2, B3, B41, B42, B43 };
enum class Quantity { J1, J2, K1, K2, K3 };

inline constexpr std::array<Region, 10> all_regions = {
    Region::A1, Region::A2, Region::A31, Region::A32, Region::B1,
    Region::B2, Region::B3, Region::B41, Region::B42, Region::B43};

/// Relative residual of the algebraic identity of the given case:
///   I:   -(tau + xi^2) + (tau1 + xi1^2) + (tau2 + xi2^2) = 2 xi1 (xi1 - xi)
///   III: -(tau + xi^2) + (tau1 - xi1^2) + (tau2 + xi2^2) = -2 xi1 xi
double algebraic_residual(Case c, double xi, double tau, double xi1, double tau1);

/// Case I symmetric set {|tau2 + xi2^2| <= |tau1 + xi1^2|} and its piece A3.
bool in_set_A(double xi, double tau, double xi1, double tau1);
bool in_A3(double xi, double tau, double xi1, double tau1);

struct RegionTag {
    Case case_id;
    Region region;

    explicit RegionTag(Region r);

    std::string name() const;
    Quantity quantity() const;
    /// Defining inequalities over (xi, tau, xi1, tau1).
    bool contains(double xi, double tau, double xi1, double tau1) const;
};

struct EstimateParams {
    double s = -0.2;
    double a = 0.45;
    double b = 0.55;
    double range_min = 100.0;  // outer frequency range of the first level
    double range_max = 1e4;    // levels double until this is reached
    int samples_per_level = 96;
    std::uint64_t seed = 7;
    double rel_tol = 1e-8;     // inner quadrature
};

// Outer coordinates are a frequency and a modulation:
//   J1, K1: (xi, sigma = tau + xi^2)        inner variable xi1
//   J2:     (xi1, sigma1 = tau1 + xi1^2)    inner variable xi
//   K2:     (xi1, sigma1 = tau1 - xi1^2)    inner variable xi
//   K3:     (xi2, sigma2 = tau2 + xi2^2)    inner variable xi1
// The remaining modulation variable is eliminated; the region becomes a mask
// on the inner variable (the set of inner values for which some admissible
// value of the eliminated variable exists).

/// Mask of the region projected to (outer frequency, outer modulation, inner).
bool projected_contains(Region r, double freq, double mod, double inner);

/// The J/K quantity of the region at one outer point.
double region_quantity(Region r, const EstimateParams& p, double freq, double mod);

struct RegionSupremum {
    double supremum = 0.0;
    std::vector<double> ranges; // outer frequency range per level
    std::vector<double> sups;   // cumulative supremum up to each level
    double growth = 0.0;        // sups.back() / sups.front()
    int evaluated = 0;
    int nonempty = 0;
    double arg_freq = 0.0;
    double arg_mod = 0.0;
};

/// Sample supremum over stratified random plus deterministic outer points,
/// each level finished by a local compass search from its best points.
/// Throws std::runtime_error if the region misses every sample.
RegionSupremum region_supremum(const RegionTag& tag, const EstimateParams& params);

} // namespace bq::est
