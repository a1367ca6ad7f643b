#include "bqlab/counterexample.hpp"

#include "bqlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bq {

using geom::Point2;
using geom::Polygon;

// --- rectangle geometry ---------------------------------------------------

RotatedRectangle::RotatedRectangle(Point2 anchor_, Point2 eta_, Point2 gam_, double len_eta_,
                                   double len_gam_)
    : anchor(anchor_), eta(eta_), gam(gam_), len_eta(len_eta_), len_gam(len_gam_)
{
    if (std::abs(geom::dot(eta, gam)) > 1e-12)
        throw std::invalid_argument("RotatedRectangle: directions not orthogonal");
    if (std::abs(std::hypot(eta.x, eta.y) - 1.0) > 1e-12 ||
        std::abs(std::hypot(gam.x, gam.y) - 1.0) > 1e-12)
        throw std::invalid_argument("RotatedRectangle: directions not unit length");
    if (!(len_eta > 0.0) || !(len_gam > 0.0))
        throw std::invalid_argument("RotatedRectangle: side lengths must be positive");
}

Polygon RotatedRectangle::corners() const
{
    Polygon c{at(0, 0), at(len_eta, 0), at(len_eta, len_gam), at(0, len_gam)};
    if (geom::signed_area(c) < 0) std::reverse(c.begin(), c.end());
    return c;
}

RotatedRectangle RotatedRectangle::negated() const
{
    return RotatedRectangle(-anchor, -eta, -gam, len_eta, len_gam);
}

namespace {

void require_N(double N, const char* who)
{
    if (!(N >= 4.0) || !std::isfinite(N))
        throw std::invalid_argument(std::string(who) + ": N must be >= 4");
}

} // namespace

RotatedRectangle make_AN(double N)
{
    require_N(N, "make_AN");
    const double r = std::sqrt(1.0 + 4.0 * N * N);
    return RotatedRectangle({N * N, N}, {2.0 * N / r, 1.0 / r}, {-1.0 / r, 2.0 * N / r}, N,
                            1.0 / N);
}

double an_modulation(double N, double alpha, double beta)
{
    // tau1 = N^2 + (2N alpha - beta)/r, xi1 = N + (alpha + 2N beta)/r
    const double r = std::sqrt(1.0 + 4.0 * N * N);
    const double u = (alpha + 2.0 * N * beta) / r;
    return -(beta * r + u * u);
}

double an_corner_modulation(double N)
{
    const RotatedRectangle A = make_AN(N);
    double worst = 0.0;
    for (double al : {0.0, A.len_eta})
        for (double be : {0.0, A.len_gam}) worst = std::max(worst, std::abs(an_modulation(N, al, be)));
    return worst;
}

Polygon bilinear_support(double N)
{
    const RotatedRectangle A = make_AN(N);
    return geom::minkowski_sum(A.corners(), A.negated().corners());
}

double bilinear_overlap(double N, Point2 p)
{
    const Polygon c = make_AN(N).corners();
    return geom::polygon_overlap_area(c, geom::translate(c, p));
}

// --- B_N --------------------------------------------------------------------

double bilinear_inner(double N, double s, double b, Point2 p, const BilinearOptions& opts)
{
    const RotatedRectangle A = make_AN(N);
    const double pe = geom::dot(p, A.eta), pg = geom::dot(p, A.gam);
    const double a_lo = std::max(0.0, pe), a_hi = std::min(A.len_eta, A.len_eta + pe);
    const double b_lo = std::max(0.0, pg), b_hi = std::min(A.len_gam, A.len_gam + pg);
    if (!(a_hi > a_lo) || !(b_hi > b_lo) || opts.f_scale == 0.0) return 0.0;

    const quad::Rule ra = quad::gauss_legendre(opts.n_alpha, a_lo, a_hi);
    const quad::Rule rb = quad::gauss_legendre(opts.n_beta, b_lo, b_hi);
    double sum = 0.0;
    for (std::size_t i = 0; i < ra.nodes.size(); ++i) {
        for (std::size_t j = 0; j < rb.nodes.size(); ++j) {
            const double al = ra.nodes[i], be = rb.nodes[j];
            double w = 1.0;
            if (!opts.unit_weights) {
                const Point2 q = A.at(al, be);
                // (tau - tau1, xi - xi1) = -(A.at(al - pe, be - pg)), so
                // tau - tau1 + (xi - xi1)^2 = -an_modulation(al - pe, be - pg)
                w = std::pow(bracket(q.y), -s) * std::pow(bracket(p.y - q.y), -s) *
                    std::pow(bracket(an_modulation(N, al - pe, be - pg)), -b) *
                    std::pow(bracket(an_modulation(N, al, be)), -b);
            }
            sum += ra.weights[i] * rb.weights[j] * w;
        }
    }
    return opts.f_scale * sum;
}

double bilinear_outer_weight(double s, double a, Point2 p)
{
    const double xi = p.y, tau = p.x;
    // |xi|^2 / gamma(xi) = |xi| / sqrt(1 + xi^2)
    const double ratio = std::abs(xi) / std::sqrt(1.0 + xi * xi);
    return ratio * std::pow(bracket(xi), s) * std::pow(bracket(tau - xi * xi), -a);
}

double bilinear_BN(double N, double s, double a, double b, const BilinearOptions& opts)
{
    require_N(N, "bilinear_BN");
    if (!(a < 0.5 && 0.5 < b)) throw std::invalid_argument("bilinear_BN: need a < 1/2 < b");
    if (opts.n_alpha < 1 || opts.n_beta < 1 || opts.short_cells < 1 || !(opts.long_cells_per_N > 0) ||
        !(opts.extent_scale > 0))
        throw std::invalid_argument("bilinear_BN: invalid resolution options");

    const RotatedRectangle A = make_AN(N);
    const Polygon support = bilinear_support(N);

    // support extents in rotated coordinates
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& v : support) {
        x_lo = std::min(x_lo, geom::dot(v, A.eta));
        x_hi = std::max(x_hi, geom::dot(v, A.eta));
        y_lo = std::min(y_lo, geom::dot(v, A.gam));
        y_hi = std::max(y_hi, geom::dot(v, A.gam));
    }
    const int nx = std::max(1, static_cast<int>(std::ceil(opts.long_cells_per_N * N)));
    const int ny = opts.short_cells;
    const double cx = 0.5 * (x_lo + x_hi), cy = 0.5 * (y_lo + y_hi);
    const double half_x = 0.5 * opts.extent_scale * (x_hi - x_lo);
    const double half_y = 0.5 * opts.extent_scale * (y_hi - y_lo);
    const double hx = 2.0 * half_x / nx, hy = 2.0 * half_y / ny;

    // one padding cell on every side; the padded grid must cover the support
    const double gx_lo = cx - half_x - hx, gx_hi = cx + half_x + hx;
    const double gy_lo = cy - half_y - hy, gy_hi = cy + half_y + hy;
    for (const auto& v : support) {
        const double X = geom::dot(v, A.eta), Y = geom::dot(v, A.gam);
        const double tol = 1e-12 * (std::abs(X) + std::abs(Y) + 1.0);
        if (X < gx_lo - tol || X > gx_hi + tol || Y < gy_lo - tol || Y > gy_hi + tol)
            throw std::runtime_error("bilinear_BN: output grid does not cover the convolution support");
    }

    double sum = 0.0;
    for (int i = -1; i <= nx; ++i) {
        const double X = cx - half_x + (i + 0.5) * hx;
        for (int j = -1; j <= ny; ++j) {
            const double Y = cy - half_y + (j + 0.5) * hy;
            const Point2 p = A.eta * X + A.gam * Y;
            const double inner = bilinear_inner(N, s, b, p, opts);
            if (inner == 0.0) continue;
            const double w = opts.unit_weights ? 1.0 : bilinear_outer_weight(s, a, p);
            sum += (w * inner) * (w * inner);
        }
    }
    return std::sqrt(sum * hx * hy);
}

// --- growth reports ---------------------------------------------------------

void validate_ladder(const std::vector<double>& N_list)
{
    if (N_list.size() < 4) throw std::invalid_argument("ladder: need at least 4 values of N");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (!(N_list[i] > N_list[i - 1]))
            throw std::invalid_argument("ladder: N values must be strictly increasing");
    if (!(N_list.back() >= 8.0 * N_list.front()))
        throw std::invalid_argument("ladder: N values must span at least a factor 8");
}

namespace {

GrowthReport make_report(const std::vector<double>& N, std::vector<double> values,
                         double predicted, bool gated)
{
    GrowthReport rep;
    rep.N = N;
    rep.values = std::move(values);
    rep.predicted = predicted;
    rep.gated = gated;
    rep.fit = fit_loglog(rep.N, rep.values);
    rep.pass = !gated || rep.fit.slope >= predicted - 0.2;
    rep.residual_flagged = rep.fit.residual > rep.residual_threshold;
    return rep;
}

} // namespace

GrowthReport bilinear_slope(const std::vector<double>& N_list, double s, double a, double b,
                            const BilinearOptions& opts)
{
    validate_ladder(N_list);
    std::vector<double> values;
    for (double N : N_list) values.push_back(bilinear_BN(N, s, a, b, opts));
    return bilinear_report(N_list, values, s, a);
}

GrowthReport bilinear_report(const std::vector<double>& N, const std::vector<double>& values,
                             double s, double a)
{
    const double predicted = -2.0 * s - a;
    return make_report(N, values, predicted, predicted > 0.2);
}

// --- ill-posedness ----------------------------------------------------------

double sinc(double z)
{
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0);
    }
    return std::sin(z) / z;
}

double illposedness_kernel(double t, double xi, double xi1)
{
    // cos(B t') cos(C t') = (cos((B-C) t') + cos((B+C) t')) / 2 and
    // int_0^t sin(A (t-t')) cos(w t') dt' = A (cos wt - cos At) / (A^2 - w^2)
    //                                     = (A t^2 / 2) sinc((A+w)t/2) sinc((A-w)t/2),
    // a product form that stays accurate through A = +-w.
    const double A = gamma(xi), B = gamma(xi - xi1), C = gamma(xi1);
    auto I = [&](double w) { return 0.5 * A * t * t * sinc(0.5 * (A + w) * t) * sinc(0.5 * (A - w) * t); };
    return 0.5 * (I(B - C) + I(B + C));
}

Interval illposedness_domain(double N, double xi)
{
    return {std::max(N + 1.0, xi + N - 1.0), std::min(N + 2.0, xi + N)};
}

double illposedness_phase(double N, double eps)
{
    // largest frequency of the construction is |xi1| = N + 2
    return std::pow(N, -(2.0 + eps)) * gamma(N + 2.0);
}

double illposedness_min_admissible_N(double eps)
{
    for (int N = 4; N <= 1000000; ++N)
        if (illposedness_phase(N, eps) <= std::numbers::pi / 3.0) return N;
    return std::numeric_limits<double>::infinity();
}

double illposedness_profile(double N, double s, double eps, double xi,
                            const IllposednessOptions& opts)
{
    const Interval dom = illposedness_domain(N, xi);
    if (dom.length() == 0.0) return 0.0;
    const double t = std::pow(N, -(2.0 + eps));
    const quad::Rule r = quad::gauss_legendre(opts.inner_nodes, dom.lo, dom.hi);
    const double k = r.apply([&](double xi1) { return illposedness_kernel(t, xi, xi1); });
    const double ratio = std::abs(xi) / std::sqrt(1.0 + xi * xi); // |xi|^2 / gamma(xi)
    return ratio / 8.0 * std::pow(N, -2.0 * s) * std::abs(k);
}

double illposedness_norm(double N, double s, double eps, const IllposednessOptions& opts)
{
    require_N(N, "illposedness_norm");
    if (illposedness_phase(N, eps) > std::numbers::pi / 3.0)
        throw precondition_violated("illposedness_norm: cosine factors can drop below 1/2 at N = " +
                                        std::to_string(N) + "; increase N",
                                    illposedness_min_admissible_N(eps));
    double sum = 0.0;
    // A_xi has a kink at xi = 2
    for (auto [lo, hi] : {std::pair{1.5, 2.0}, std::pair{2.0, 2.5}}) {
        const quad::Rule r = quad::gauss_legendre(opts.outer_nodes, lo, hi);
        sum += r.apply([&](double xi) {
            const double h = illposedness_profile(N, s, eps, xi, opts);
            return std::pow(bracket(xi), 2.0 * s) * h * h;
        });
    }
    return std::sqrt(sum);
}

GrowthReport illposedness_slope(const std::vector<double>& N_list, double s, double eps,
                                const IllposednessOptions& opts)
{
    validate_ladder(N_list);
    std::vector<double> values;
    for (double N : N_list) values.push_back(illposedness_norm(N, s, eps, opts));
    return illposedness_report(N_list, values, s, eps);
}

GrowthReport illposedness_report(const std::vector<double>& N, const std::vector<double>& values,
                                 double s, double eps)
{
    const double predicted = -2.0 * s - 4.0 - 2.0 * eps;
    return make_report(N, values, predicted, s < -2.0 && predicted > 0.0);
}

SpectralField frechet_second_derivative(const SpectralField& phi, const SpectralField& rho,
                                        double t)
{
    if (!(phi.grid == rho.grid))
        throw std::invalid_argument("frechet_second_derivative: fields on different grids");
    const FrequencyGrid& g = phi.grid;
    SpectralField out(g);
    if (t == 0.0) return out;
    const int n = g.size(), m = g.max_wavenumber();
    std::vector<int> support;
    for (int k1 = 0; k1 < n; ++k1)
        if (rho[k1] != 0.0) support.push_back(k1);
    const double scale = g.spacing() / (2.0 * std::numbers::pi);
    for (int k = 0; k < n; ++k) {
        const double xi = g.node(k);
        if (xi == 0.0) continue;
        complex sum = 0.0;
        for (int k1 : support) {
            const int idx = k - k1 + m; // wavenumber (k - m) - (k1 - m)
            if (idx < 0 || idx >= n || phi[idx] == 0.0) continue;
            sum += phi[idx] * rho[k1] * illposedness_kernel(t, xi, g.node(k1));
        }
        // V_s multiplier sin(.)/gamma times the -xi^2 of d_xx
        const double ratio = std::abs(xi) / std::sqrt(1.0 + xi * xi);
        out[k] = -2.0 * ratio * scale * sum;
    }
    return out;
}

} // namespace bq
