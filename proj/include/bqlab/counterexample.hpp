#pragma once

// The two negative results as measurable experiments.
//
// Bilinear counterexample: A_N = {(N^2, N) + alpha*eta + beta*gam :
// 0 <= alpha <= N, 0 <= beta <= 1/N} with eta = (2N, 1)/r, gam = (-1, 2N)/r,
// r = sqrt(1 + 4N^2); f_N = chi_{A_N}, g_N = chi_{-A_N}. Points are (tau, xi).
//
// Ill-posedness: phi^ = N^-s chi_[-N, -N+1], rho^ = N^-s chi_[N+1, N+2],
// t = N^-(2+eps), and the kernel
//   K(t, xi, xi1) = int_0^t sin((t-t') g(xi)) cos(t' g(xi-xi1)) cos(t' g(xi1)) dt'.

#include "bqlab/fields.hpp"
#include "bqlab/fit.hpp"
#include "bqlab/geometry.hpp"

#include <stdexcept>
#include <vector>

namespace bq {

struct RotatedRectangle {
    geom::Point2 anchor;
    geom::Point2 eta;   // unit
    geom::Point2 gam;   // unit, orthogonal to eta
    double len_eta = 0.0;
    double len_gam = 0.0;

    /// Throws std::invalid_argument unless the directions are orthonormal
    /// (to 1e-12) and both lengths positive.
    RotatedRectangle(geom::Point2 anchor, geom::Point2 eta, geom::Point2 gam, double len_eta,
                     double len_gam);

    geom::Point2 at(double alpha, double beta) const { return anchor + eta * alpha + gam * beta; }
    /// Counter-clockwise corner list.
    geom::Polygon corners() const;
    RotatedRectangle negated() const;
    double area() const { return len_eta * len_gam; }
};

/// A_N; throws std::invalid_argument for N < 4.
RotatedRectangle make_AN(double N);

/// tau1 - xi1^2 at the point (alpha, beta) of A_N, in a cancellation-free form.
double an_modulation(double N, double alpha, double beta);

/// max over the corners of A_N of |tau - xi^2|.
double an_corner_modulation(double N);

/// Convolution support of f_N * g_N, i.e. A_N - A_N, as a polygon.
geom::Polygon bilinear_support(double N);

/// area(A_N cap (A_N + p)) = (f_N * g_N)(p), exact.
double bilinear_overlap(double N, geom::Point2 p);

struct BilinearOptions {
    int n_alpha = 64;            // Gauss nodes along the long side of A_N
    int n_beta = 8;              // Gauss nodes along the short side
    double long_cells_per_N = 1; // output cells along eta per unit N
    int short_cells = 64;        // output cells across the support
    double extent_scale = 1.0;   // output grid half-extents relative to the support
    bool unit_weights = false;   // every bracket and the outer weight set to 1
    double f_scale = 1.0;        // f_N replaced by f_scale * f_N
};

/// Inner double integral at the output point p (no outer weight).
double bilinear_inner(double N, double s, double b, geom::Point2 p,
                      const BilinearOptions& opts = {});

/// Outer weight |xi|^2 <xi>^s / (gamma(xi) <tau - xi^2>^a).
double bilinear_outer_weight(double s, double a, geom::Point2 p);

/// Discrete L^2 norm of outer weight * inner integral over an output grid
/// built from the support polygon. Throws std::invalid_argument for N < 4 or
/// a, b outside a < 1/2 < b, and std::runtime_error if the grid fails to
/// cover the support.
double bilinear_BN(double N, double s, double a, double b, const BilinearOptions& opts = {});

struct GrowthReport {
    std::vector<double> N;
    std::vector<double> values;
    LineFit fit;
    double predicted = 0.0;
    bool gated = false;           // false: report only, pass is always true
    bool pass = false;
    double residual_threshold = 0.1;
    bool residual_flagged = false;
};

/// Checks the ladder: >= 4 increasing values spanning >= 8x.
void validate_ladder(const std::vector<double>& N_list);

/// Report for already computed B_N values (the slope and gating rule below).
GrowthReport bilinear_report(const std::vector<double>& N, const std::vector<double>& values,
                             double s, double a);

/// Slope of log B_N against log N. Predicted slope -2s - a; gated iff the
/// prediction exceeds the 0.2 slack, pass iff slope >= predicted - 0.2.
GrowthReport bilinear_slope(const std::vector<double>& N_list, double s, double a, double b,
                            const BilinearOptions& opts = {});

/// sin(z)/z with the removable singularity filled in.
double sinc(double z);

/// Closed form of K(t, xi, xi1).
double illposedness_kernel(double t, double xi, double xi1);

/// [lo, hi] = [N+1, N+2] cap [xi+N-1, xi+N]; empty when lo >= hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi > lo ? hi - lo : 0.0; }
};
Interval illposedness_domain(double N, double xi);

class precondition_violated : public std::runtime_error {
public:
    precondition_violated(const std::string& what, double min_N)
        : std::runtime_error(what), min_N_(min_N)
    {
    }
    double min_admissible_N() const { return min_N_; }

private:
    double min_N_;
};

/// t * max gamma over the frequencies of the construction, t = N^-(2+eps).
/// The cosine factors stay >= 1/2 iff this is <= pi/3.
double illposedness_phase(double N, double eps);

/// Smallest integer N >= 4 at which the phase condition holds.
double illposedness_min_admissible_N(double eps);

struct IllposednessOptions {
    int outer_nodes = 32; // Gauss nodes on each of [3/2, 2] and [2, 5/2]
    int inner_nodes = 32; // Gauss nodes on A_xi
};

/// |h(xi)| with h(xi) = int_{A_xi} -|xi|^2/(8 i gamma(xi)) N^-2s K(t, xi, xi1) dxi1.
double illposedness_profile(double N, double s, double eps, double xi,
                            const IllposednessOptions& opts = {});

/// (int_{3/2}^{5/2} <xi>^{2s} |h(xi)|^2 dxi)^{1/2}. Throws precondition_violated
/// when the phase condition fails at N.
double illposedness_norm(double N, double s, double eps, const IllposednessOptions& opts = {});

/// Report for already computed illposedness_norm values.
GrowthReport illposedness_report(const std::vector<double>& N, const std::vector<double>& values,
                                 double s, double eps);

/// Predicted slope -2s - 4 - 2 eps; gated iff s < -2 and the prediction is positive.
GrowthReport illposedness_slope(const std::vector<double>& N_list, double s, double eps,
                                const IllposednessOptions& opts = {});

/// 2 int_0^t V_s(t - t') (V_c(t') phi * V_c(t') rho)_xx dt' on the grid of phi.
/// Throws std::invalid_argument if the grids differ.
SpectralField frechet_second_derivative(const SpectralField& phi, const SpectralField& rho,
                                        double t);

} // namespace bq
