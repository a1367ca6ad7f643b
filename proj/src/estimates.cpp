#include "bqlab/estimates.hpp"

#include "bqlab/quadrature.hpp"
#include "bqlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace bq::est {

namespace {

using Fn = std::function<double(double)>;

struct Poly2 {
    double c0, c1, c2;
    double operator()(double x) const { return c0 + x * (c1 + x * c2); }
};

void push_roots(const Poly2& p, std::vector<double>& out)
{
    if (p.c2 == 0.0) {
        if (p.c1 != 0.0) out.push_back(-p.c0 / p.c1);
        return;
    }
    const double disc = p.c1 * p.c1 - 4.0 * p.c2 * p.c0;
    if (disc < 0.0) return;
    const double q = -0.5 * (p.c1 + std::copysign(std::sqrt(disc), p.c1));
    if (q != 0.0) {
        out.push_back(q / p.c2);
        out.push_back(p.c0 / q);
    } else {
        out.push_back(0.0);
    }
}

// Geometric refinement around a point where the integrand peaks.
void push_grading(double p, std::vector<double>& out)
{
    out.push_back(p);
    for (int k = -8; k <= 8; ++k) {
        const double h = std::pow(10.0, k);
        out.push_back(p - h);
        out.push_back(p + h);
    }
}

// int over R of mask * f, with the mask constant between consecutive breaks.
double integrate_masked(const Fn& f, const std::function<bool(double)>& mask,
                        std::vector<double> breaks, double decay, double rel_tol)
{
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [](double x) { return !std::isfinite(x); }),
                 breaks.end());
    if (breaks.empty()) breaks.push_back(0.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double sum = 0.0;
    const double lo = breaks.front(), hi = breaks.back();
    auto tail = [&](const Fn& g, double start) {
        if (!(decay > 1.0))
            throw std::runtime_error("region integral: mask unbounded and integrand not integrable");
        return quad::integrate_tail(g, start, decay, 1e-12, rel_tol);
    };
    if (mask(lo - 1.0 - std::abs(lo))) sum += tail([&](double y) { return f(-y); }, -lo);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (mask(0.5 * (a + b))) sum += quad::integrate(f, a, b, rel_tol);
    }
    if (mask(hi + 1.0 + std::abs(hi))) sum += tail(f, hi);
    return sum;
}

double pow_bracket(double x, double e) { return std::pow(bracket(x), e); }

} // namespace

// --- calculus inequalities ------------------------------------------------

double ci1_exponent(double p, double q) { return std::min({p, q, p + q - 1.0}); }

double ci1_value(double alpha, double beta, double p, double q)
{
    if (!(p > 0.0 && q > 0.0 && p + q > 1.0))
        throw std::invalid_argument("ci1_value: need p, q > 0 and p + q > 1");
    auto f = [=](double x) { return pow_bracket(x - alpha, -p) * pow_bracket(x - beta, -q); };
    const double lo = std::min(alpha, beta), hi = std::max(alpha, beta);
    const double tol = 1e-12;
    double sum = quad::integrate(f, lo, hi, tol);
    sum += quad::integrate_tail(f, hi, p + q, 1e-12, tol);
    sum += quad::integrate_tail([&](double y) { return f(-y); }, -lo, p + q, 1e-12, tol);
    return sum;
}

double ci2_value(double a0, double a1, double a2, double q)
{
    if (!(q > 0.5)) throw std::invalid_argument("ci2_value: need q > 1/2");
    if (a2 == 0.0) throw std::invalid_argument("ci2_value: a2 must be nonzero");
    const Poly2 poly{a0, a1, a2};
    auto f = [&](double x) { return pow_bracket(poly(x), -q); };
    std::vector<double> breaks;
    std::vector<double> peaks;
    push_roots(poly, peaks);
    peaks.push_back(-a1 / (2.0 * a2));
    for (double p : peaks) push_grading(p, breaks);
    return integrate_masked(f, [](double) { return true; }, breaks, 2.0 * q, 1e-12);
}

// --- symbol equivalence and weights ---------------------------------------

double symbol_equiv_ratio(double x, double y)
{
    // sqrt(y^2 + y) - y, written without cancellation
    const double gap = y > 0.0 ? y / (std::sqrt(y * y + y) + y) : 0.0;
    return (1.0 + std::abs(x - y)) / (1.0 + std::abs((x - y) - gap));
}

RatioRange symbol_equiv_sup(double x_max, double y_max, int n)
{
    if (!(x_max > 0.0 && y_max > 0.0) || n < 2)
        throw std::invalid_argument("symbol_equiv_sup: need positive bounds and n >= 2");
    RatioRange r{std::numeric_limits<double>::infinity(), 0.0};
    for (int i = 0; i < n; ++i) {
        const double x = x_max * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double v = symbol_equiv_ratio(x, y_max * j / (n - 1));
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
        }
    }
    return r;
}

double weight_exponent(double s) { return s < 0.0 ? 4.0 * std::abs(s) : 0.0; }

double weight_ratio(double s, double xi, double xi1)
{
    const double l = std::log(bracket(xi)) - std::log(bracket(xi1)) - std::log(bracket(xi - xi1));
    return std::exp(2.0 * s * l);
}

bool corollary_split_check(double s, double s_prime, double xi, double xi1)
{
    if (!(s_prime > s)) throw std::invalid_argument("corollary_split_check: need s' > s");
    const double d = s_prime - s;
    const double lhs = std::pow(bracket(xi), s_prime);
    const double rhs =
        std::pow(bracket(xi), s) * (std::pow(bracket(xi1), d) + std::pow(bracket(xi - xi1), d));
    return lhs <= rhs * (1.0 + 1e-12);
}

// --- regions --------------------------------------------------------------

double algebraic_residual(Case c, double xi, double tau, double xi1, double tau1)
{
    const double xi2 = xi - xi1, tau2 = tau - tau1;
    const double s1 = c == Case::I ? tau1 + xi1 * xi1 : tau1 - xi1 * xi1;
    const double lhs = -(tau + xi * xi) + s1 + (tau2 + xi2 * xi2);
    const double rhs = c == Case::I ? 2.0 * xi1 * (xi1 - xi) : -2.0 * xi1 * xi;
    const double scale = std::abs(tau) + xi * xi + std::abs(tau1) + xi1 * xi1 + 1.0;
    return std::abs(lhs - rhs) / scale;
}

bool in_set_A(double xi, double tau, double xi1, double tau1)
{
    const double s1 = tau1 + xi1 * xi1;
    const double s2 = (tau - tau1) + (xi - xi1) * (xi - xi1);
    return std::abs(s2) <= std::abs(s1);
}

bool in_A3(double xi, double tau, double xi1, double tau1)
{
    return in_set_A(xi, tau, xi1, tau1) && std::abs(xi1) >= 10.0 &&
           std::abs(xi1 - xi) >= std::abs(xi1) / 2.0;
}

RegionTag::RegionTag(Region r)
    : case_id(static_cast<int>(r) <= static_cast<int>(Region::A32) ? Case::I : Case::III),
      region(r)
{
}

std::string RegionTag::name() const
{
    static const char* names[] = {"A1", "A2", "A31", "A32", "B1", "B2", "B3", "B41", "B42", "B43"};
    return names[static_cast<int>(region)];
}

Quantity RegionTag::quantity() const
{
    switch (region) {
    case Region::A1:
    case Region::A2:
    case Region::A31: return Quantity::J1;
    case Region::A32: return Quantity::J2;
    case Region::B1:
    case Region::B3:
    case Region::B41: return Quantity::K1;
    case Region::B2:
    case Region::B42: return Quantity::K2;
    case Region::B43: return Quantity::K3;
    }
    throw std::logic_error("RegionTag: unknown region");
}

bool RegionTag::contains(double xi, double tau, double xi1, double tau1) const
{
    const double axi = std::abs(xi), axi1 = std::abs(xi1);
    const double xi2 = xi - xi1, tau2 = tau - tau1;
    if (case_id == Case::I) {
        const double s = std::abs(tau + xi * xi);
        const double s1 = std::abs(tau1 + xi1 * xi1);
        if (!in_set_A(xi, tau, xi1, tau1)) return false;
        switch (region) {
        case Region::A1: return axi1 <= 10.0;
        case Region::A2: return axi1 >= 10.0 && std::abs(2.0 * xi1 - xi) >= axi1 / 2.0;
        case Region::A31: return in_A3(xi, tau, xi1, tau1) && s1 <= s;
        case Region::A32: return in_A3(xi, tau, xi1, tau1) && s <= s1;
        default: break;
        }
        return false;
    }
    const double s = std::abs(tau + xi * xi);
    const double s1 = std::abs(tau1 - xi1 * xi1);
    const double s2 = std::abs(tau2 + xi2 * xi2);
    const bool b4 = axi1 >= 10.0 && axi >= 1.0 && axi <= axi1 / 2.0;
    switch (region) {
    case Region::B1: return axi1 <= 10.0;
    case Region::B2: return axi1 >= 10.0 && axi <= 1.0;
    case Region::B3: return axi1 >= 10.0 && axi >= 1.0 && axi >= axi1 / 2.0;
    case Region::B41: return b4 && s1 <= s && s2 <= s;
    case Region::B42: return b4 && s <= s1 && s2 <= s1;
    case Region::B43: return b4 && s1 <= s2 && s <= s2;
    default: break;
    }
    return false;
}

namespace {

// Region data at one outer point: the mask on the inner variable, the
// polynomials whose roots bound the mask, the modulation polynomial inside
// the integrand, its bracket exponent and whether <inner>^gamma(s) appears.
struct InnerProblem {
    std::function<bool(double)> mask;
    std::vector<Poly2> boundaries;
    Poly2 modulation{0, 0, 0};
    double exponent = 0.0;
    bool inner_weight = false;
    double prefactor = 1.0;
};

InnerProblem inner_problem(Region r, double f, double m, double s, double a, double b)
{
    const double g = weight_exponent(s);
    const double am = std::abs(m);
    InnerProblem p;
    switch (RegionTag(r).quantity()) {
    case Quantity::J1: {
        // xi = f, sigma = m; eliminated sigma1 + sigma2 = P(xi1)
        const Poly2 P{m, -2.0 * f, 2.0};
        p.modulation = P;
        p.exponent = 2.0 * b;
        p.inner_weight = true;
        p.prefactor = pow_bracket(m, -2.0 * a);
        p.boundaries = {{-10, 1, 0}, {10, 1, 0}};
        if (r == Region::A1) {
            p.mask = [](double x) { return std::abs(x) <= 10.0; };
        } else if (r == Region::A2) {
            p.boundaries.push_back({-f, 1.5, 0});
            p.boundaries.push_back({-f, 2.5, 0});
            p.mask = [f](double x) {
                return std::abs(x) >= 10.0 && std::abs(2.0 * x - f) >= std::abs(x) / 2.0;
            };
        } else { // A31
            p.boundaries.push_back({-f, 0.5, 0});
            p.boundaries.push_back({-f, 1.5, 0});
            p.boundaries.push_back({m - 2.0 * am, -2.0 * f, 2.0});
            p.boundaries.push_back({m + 2.0 * am, -2.0 * f, 2.0});
            p.mask = [f, am, P](double x) {
                return std::abs(x) >= 10.0 && std::abs(x - f) >= std::abs(x) / 2.0 &&
                       std::abs(P(x)) <= 2.0 * am;
            };
        }
        break;
    }
    case Quantity::J2: {
        // xi1 = f, sigma1 = m, inner xi; eliminated sigma - sigma2 = Q(xi)
        const Poly2 Q{m - 2.0 * f * f, 2.0 * f, 0.0};
        p.modulation = Q;
        p.exponent = 2.0 * a;
        p.prefactor = pow_bracket(f, g) * pow_bracket(m, -2.0 * b);
        p.boundaries = {{-1.5 * f, 1, 0}, {-0.5 * f, 1, 0}, {Q.c0 - 2.0 * am, Q.c1, 0},
                        {Q.c0 + 2.0 * am, Q.c1, 0}};
        p.mask = [f, am, Q](double x) {
            return std::abs(f) >= 10.0 && std::abs(f - x) >= std::abs(f) / 2.0 &&
                   std::abs(Q(x)) <= 2.0 * am;
        };
        break;
    }
    case Quantity::K1: {
        // xi = f, sigma = m, inner xi1; sigma1 + sigma2 = P(xi1)
        const Poly2 P{m, -2.0 * f, 0.0};
        p.modulation = P;
        p.exponent = 2.0 * b;
        p.inner_weight = true;
        p.prefactor = pow_bracket(m, -2.0 * a);
        p.boundaries = {{-10, 1, 0}, {10, 1, 0}, {-2.0 * f, 1, 0}, {2.0 * f, 1, 0}};
        const double af = std::abs(f);
        if (r == Region::B1) {
            p.mask = [](double x) { return std::abs(x) <= 10.0; };
        } else if (r == Region::B3) {
            p.mask = [af](double x) {
                return std::abs(x) >= 10.0 && af >= 1.0 && af >= std::abs(x) / 2.0;
            };
        } else { // B41
            p.boundaries.push_back({m - 2.0 * am, -2.0 * f, 0});
            p.boundaries.push_back({m + 2.0 * am, -2.0 * f, 0});
            p.mask = [af, am, P](double x) {
                return std::abs(x) >= 10.0 && af >= 1.0 && af <= std::abs(x) / 2.0 &&
                       std::abs(P(x)) <= 2.0 * am;
            };
        }
        break;
    }
    case Quantity::K2: {
        // xi1 = f, sigma1 = m (= tau1 - xi1^2), inner xi; sigma - sigma2 = Q(xi)
        const Poly2 Q{m, 2.0 * f, 0.0};
        p.modulation = Q;
        p.exponent = 2.0 * a;
        p.prefactor = pow_bracket(f, g) * pow_bracket(m, -2.0 * b);
        p.boundaries = {{-1, 1, 0}, {1, 1, 0}, {-0.5 * f, 1, 0}, {0.5 * f, 1, 0}};
        const double af = std::abs(f);
        if (r == Region::B2) {
            p.mask = [af](double x) { return af >= 10.0 && std::abs(x) <= 1.0; };
        } else { // B42
            p.boundaries.push_back({m - 2.0 * am, 2.0 * f, 0});
            p.boundaries.push_back({m + 2.0 * am, 2.0 * f, 0});
            p.mask = [af, am, Q](double x) {
                const double ax = std::abs(x);
                return af >= 10.0 && ax >= 1.0 && ax <= af / 2.0 && std::abs(Q(x)) <= 2.0 * am;
            };
        }
        break;
    }
    case Quantity::K3: {
        // xi2 = f, sigma2 = m, inner xi1 with xi = xi1 + xi2; sigma - sigma1 = R(xi1)
        const Poly2 R{m, 2.0 * f, 2.0};
        p.modulation = R;
        p.exponent = 2.0 * a;
        p.inner_weight = true;
        p.prefactor = pow_bracket(m, -2.0 * b);
        p.boundaries = {{-10, 1, 0},       {10, 1, 0},        {f - 1, 1, 0},
                        {f + 1, 1, 0},     {2.0 * f, 1, 0},   {2.0 * f / 3.0, 1, 0},
                        {m - 2.0 * am, 2.0 * f, 2.0}, {m + 2.0 * am, 2.0 * f, 2.0}};
        p.mask = [f, am, R](double x) {
            const double axi = std::abs(x + f);
            return std::abs(x) >= 10.0 && axi >= 1.0 && axi <= std::abs(x) / 2.0 &&
                   std::abs(R(x)) <= 2.0 * am;
        };
        break;
    }
    }
    return p;
}

} // namespace

bool projected_contains(Region r, double freq, double mod, double inner)
{
    return inner_problem(r, freq, mod, 0.0, 0.45, 0.55).mask(inner);
}

double region_quantity(Region r, const EstimateParams& params, double freq, double mod)
{
    const auto p = inner_problem(r, freq, mod, params.s, params.a, params.b);
    const double g = weight_exponent(params.s);
    std::vector<double> breaks;
    for (const auto& poly : p.boundaries) push_roots(poly, breaks);
    std::vector<double> peaks;
    push_roots(p.modulation, peaks);
    if (p.modulation.c2 != 0.0) peaks.push_back(-p.modulation.c1 / (2.0 * p.modulation.c2));
    if (p.inner_weight) peaks.push_back(0.0);
    for (double x : peaks) push_grading(x, breaks);

    const Poly2 mod_poly = p.modulation;
    const double e = p.exponent;
    const bool w = p.inner_weight;
    auto f = [&](double x) {
        double v = pow_bracket(mod_poly(x), -e);
        if (w) v *= pow_bracket(x, g);
        return v;
    };
    const double degree = mod_poly.c2 != 0.0 ? 2.0 : 1.0;
    const double decay = degree * e - (w ? g : 0.0);
    return p.prefactor * integrate_masked(f, p.mask, breaks, decay, params.rel_tol);
}

RegionSupremum region_supremum(const RegionTag& tag, const EstimateParams& params)
{
    if (!(params.range_min > 0.0 && params.range_max >= params.range_min) ||
        params.samples_per_level < 0)
        throw std::invalid_argument("region_supremum: bad sampler spec");
    const bool case_i = tag.case_id == Case::I;
    const Quantity q = tag.quantity();
    if (case_i != (q == Quantity::J1 || q == Quantity::J2))
        throw std::invalid_argument("region_supremum: quantity does not match case");

    RegionSupremum out;
    std::mt19937_64 rng(params.seed * 1000003ULL + static_cast<std::uint64_t>(tag.region));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sign = [&] { return unit(rng) < 0.5 ? -1.0 : 1.0; };

    struct Sample {
        double f, m, v;
    };
    std::vector<Sample> seen;
    auto consider = [&](double f, double m) {
        const double v = region_quantity(tag.region, params, f, m);
        ++out.evaluated;
        if (v > 0.0) ++out.nonempty;
        seen.push_back({f, m, v});
        if (v > out.supremum) {
            out.supremum = v;
            out.arg_freq = f;
            out.arg_mod = m;
        }
        return v;
    };

    // Compass search in (asinh f, asinh m) from the best points so far,
    // confined to the current range.
    auto refine = [&](double R) {
        std::vector<Sample> starts = seen;
        std::sort(starts.begin(), starts.end(),
                  [](const Sample& x, const Sample& y) { return x.v > y.v; });
        starts.resize(std::min<std::size_t>(starts.size(), 4));
        const double umax = std::asinh(R), vmax = std::asinh(R * R);
        for (const auto& st : starts) {
            if (!(st.v > 0.0)) continue;
            double u = std::asinh(st.f), w = std::asinh(st.m), best = st.v;
            for (double step = 0.5; step >= 1e-3; step /= 2.0) {
                for (bool moved = true; moved;) {
                    moved = false;
                    const double du[] = {step, -step, 0.0, 0.0};
                    const double dw[] = {0.0, 0.0, step, -step};
                    for (int d = 0; d < 4; ++d) {
                        const double nu = std::clamp(u + du[d], -umax, umax);
                        const double nw = std::clamp(w + dw[d], -vmax, vmax);
                        if (nu == u && nw == w) continue;
                        const double v = consider(std::sinh(nu), std::sinh(nw));
                        if (v > best) {
                            best = v;
                            u = nu;
                            w = nw;
                            moved = true;
                        }
                    }
                }
            }
        }
    };

    for (double R = params.range_min;; R *= 2.0) {
        for (double f : {0.0, 1.0, -1.0, 10.0, -10.0, R / 2, -R / 2, R, -R})
            for (double m : {0.0, 1.0, -1.0, R, -R, R * R, -R * R}) consider(f, m);
        for (int i = 0; i < params.samples_per_level; ++i) {
            const double f = unit(rng) < 0.5 ? R * (2.0 * unit(rng) - 1.0)
                                             : sign() * std::exp(std::log(1e-2) +
                                                                 unit(rng) * std::log(R / 1e-2));
            double m;
            const double pick = unit(rng);
            if (pick < 1.0 / 3.0)
                m = R * R * (2.0 * unit(rng) - 1.0);
            else if (pick < 2.0 / 3.0)
                m = sign() * std::exp(unit(rng) * std::log(R * R));
            else
                m = f * f * (6.0 * unit(rng) - 3.0);
            consider(f, m);
        }
        refine(R);
        out.ranges.push_back(R);
        out.sups.push_back(out.supremum);
        if (R >= params.range_max) break;
    }
    if (out.nonempty == 0)
        throw std::runtime_error("region_supremum: region " + tag.name() +
                                 " is empty on every sampled point");
    out.growth = out.sups.front() > 0.0 ? out.sups.back() / out.sups.front()
                                        : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace bq::est
