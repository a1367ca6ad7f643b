#include "bqlab/counterexample.hpp"
#include "bqlab/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bq;
using geom::Point2;
using testing::Rng;

TEST_CASE("A_N: construction, area, orientation")
{
    const auto A = make_AN(10);
    CHECK(A.anchor.x == 100.0);
    CHECK(A.anchor.y == 10.0);
    CHECK(A.eta.x == doctest::Approx(20.0 / std::sqrt(401.0)));
    CHECK(A.eta.y == doctest::Approx(1.0 / std::sqrt(401.0)));
    CHECK(A.area() == doctest::Approx(1.0));
    CHECK(geom::area(A.corners()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(geom::signed_area(A.corners()) > 0.0);
    CHECK(geom::signed_area(A.negated().corners()) > 0.0);
    CHECK_THROWS_AS(make_AN(3.5), std::invalid_argument);
    CHECK_THROWS_AS(RotatedRectangle({0, 0}, {1, 0}, {1, 0}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(RotatedRectangle({0, 0}, {2, 0}, {0, 2}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(RotatedRectangle({0, 0}, {1, 0}, {0, 1}, 0, 1), std::invalid_argument);
}

TEST_CASE("A_N: frequency and modulation bookkeeping")
{
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double N = rng.integer(4, 512);
        const auto A = make_AN(N);
        const double al = rng.uniform(0, N), be = rng.uniform(0, 1 / N);
        const Point2 q = A.at(al, be);
        CHECK(q.y >= N - 1e-9);
        CHECK(q.y <= N + 1.0);
        // direct evaluation in extended precision
        const long double r = std::sqrt(1.0L + 4.0L * N * N);
        const long double tau = (long double)N * N + (2.0L * N * al - be) / r;
        const long double xi = N + (al + 2.0L * N * be) / r;
        const double direct = static_cast<double>(tau - xi * xi);
        CHECK(an_modulation(N, al, be) == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
        CHECK(std::abs(an_modulation(N, al, be)) <= 3.0);
    }
    for (int N = 4; N <= 512; N *= 2) CHECK(an_corner_modulation(N) <= 3.0);
}

TEST_CASE("convolution support and overlap")
{
    const double N = 8;
    const auto A = make_AN(N);
    CHECK(bilinear_overlap(N, {0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bilinear_overlap(N, A.eta * (N / 2)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bilinear_overlap(N, A.gam * (0.5 / N)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bilinear_overlap(N, A.eta * (N / 2) + A.gam * (0.5 / N)) == doctest::Approx(0.25).epsilon(1e-12));

    const auto support = bilinear_support(N);
    CHECK(geom::area(support) == doctest::Approx(4.0).epsilon(1e-10));
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const Point2 p = A.eta * rng.uniform(-1.2 * N, 1.2 * N) + A.gam * rng.uniform(-1.2 / N, 1.2 / N);
        const double u = geom::dot(p, A.eta), v = geom::dot(p, A.gam);
        const bool inside = std::abs(u) < N && std::abs(v) < 1 / N;
        const double expect = inside ? (N - std::abs(u)) * (1 / N - std::abs(v)) : 0.0;
        if (inside) {
            CHECK(geom::contains(support, p, 1e-9));
            CHECK(bilinear_overlap(N, p) == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
        } else {
            CHECK_FALSE(geom::contains(support, p, -1e-9));
        }
    }
}

TEST_CASE("bilinear inner integral: unit weights, scaling, independent weighted oracle")
{
    const double N = 8, s = -0.3, b = 0.55;
    const auto A = make_AN(N);
    BilinearOptions unit;
    unit.unit_weights = true;
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        const Point2 p = A.eta * rng.uniform(-N, N) + A.gam * rng.uniform(-1 / N, 1 / N);
        CHECK(bilinear_inner(N, s, b, p, unit) == doctest::Approx(bilinear_overlap(N, p)).epsilon(1e-10));
    }
    BilinearOptions zero;
    zero.f_scale = 0.0;
    CHECK(bilinear_inner(N, s, b, {0, 0}, zero) == 0.0);
    CHECK(bilinear_BN(N, s, 0.45, b, zero) == 0.0);

    // midpoint rule in (alpha, beta) with brackets evaluated from raw coordinates
    for (const Point2 p : {Point2{0, 0}, A.eta * 2.5 + A.gam * (0.03), A.eta * (-5.0) + A.gam * (-0.1)}) {
        const double pe = geom::dot(p, A.eta), pg = geom::dot(p, A.gam);
        const double alo = std::max(0.0, pe), ahi = std::min(N, N + pe);
        const double blo = std::max(0.0, pg), bhi = std::min(1 / N, 1 / N + pg);
        const int na = 4000, nb = 400;
        long double sum = 0;
        for (int i = 0; i < na; ++i)
            for (int j = 0; j < nb; ++j) {
                const double al = alo + (i + 0.5) * (ahi - alo) / na;
                const double be = blo + (j + 0.5) * (bhi - blo) / nb;
                const long double tau1 = A.anchor.x + A.eta.x * (long double)al + A.gam.x * (long double)be;
                const long double xi1 = A.anchor.y + A.eta.y * (long double)al + A.gam.y * (long double)be;
                const long double tau2 = p.x - tau1, xi2 = p.y - xi1;
                const double m1 = static_cast<double>(tau1 - xi1 * xi1);
                const double m2 = static_cast<double>(tau2 + xi2 * xi2);
                sum += std::pow(bracket((double)xi1), -s) * std::pow(bracket((double)xi2), -s) *
                       std::pow(bracket(m1), -b) * std::pow(bracket(m2), -b);
            }
        const double oracle = static_cast<double>(sum) * (ahi - alo) * (bhi - blo) / (na * nb);
        CHECK(bilinear_inner(N, s, b, p) == doctest::Approx(oracle).epsilon(1e-5));
    }
}

TEST_CASE("B_N: unit weights reproduce the exact L2 norm of the overlap function")
{
    // int (N - |u|)^2 (1/N - |v|)^2 du dv = (2 N^3 / 3)(2 N^-3 / 3)
    BilinearOptions unit;
    unit.unit_weights = true;
    unit.long_cells_per_N = 4;
    for (double N : {8.0, 16.0}) CHECK(bilinear_BN(N, 0, 0.45, 0.55, unit) == doctest::Approx(2.0 / 3.0).epsilon(2e-3));

    BilinearOptions narrow;
    narrow.extent_scale = 0.5;
    CHECK_THROWS_AS(bilinear_BN(8, 0, 0.45, 0.55, narrow), std::runtime_error);
    CHECK_THROWS_AS(bilinear_BN(8, 0, 0.6, 0.55), std::invalid_argument);
    CHECK_THROWS_AS(bilinear_BN(2, 0, 0.45, 0.55), std::invalid_argument);
}

TEST_CASE("outer weight range")
{
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const double xi = rng.uniform(-50, 50), tau = rng.uniform(-3000, 3000);
        const double s = rng.uniform(-1, 1), a = rng.uniform(0, 0.5);
        const double w = bilinear_outer_weight(s, a, {tau, xi});
        const double direct = xi * xi * std::pow(bracket(xi), s) /
                              (bq::gamma(xi) * std::pow(bracket(tau - xi * xi), a));
        CHECK(w == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("ill-posedness kernel against direct quadrature")
{
    CHECK(illposedness_kernel(0.0, 2.0, 20.0) == 0.0);
    CHECK(illposedness_kernel(0.01, 0.0, 20.0) == 0.0);
    Rng rng(15);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double N = rng.uniform(4, 200);
        const double t = i % 2 ? std::pow(N, -2.1) : rng.uniform(0, 3.0 / (N * N));
        const double xi = rng.uniform(-3, 3), xi1 = rng.uniform(N, N + 3);
        const double A = bq::gamma(xi), B = bq::gamma(xi - xi1), C = bq::gamma(xi1);
        const double direct = testing::boost_composite(
            [&](double s) { return std::sin((t - s) * A) * std::cos(s * B) * std::cos(s * C); }, 0.0, t, 16);
        worst = std::max(worst, std::abs(illposedness_kernel(t, xi, xi1) - direct) / t);
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("ill-posedness domain, phase and precondition")
{
    for (double N : {16.0, 64.0, 300.0})
        for (double xi = 1.5; xi <= 2.5; xi += 0.05) {
            const Interval d = illposedness_domain(N, xi);
            CHECK(d.length() >= 0.5 - 1e-12);
            CHECK(bq::gamma(d.lo) >= N * N);
            CHECK(bq::gamma(d.hi) <= (N + 3) * (N + 3) + 1);
        }
    CHECK(illposedness_domain(20, 5.0).length() == 0.0);
    CHECK(illposedness_min_admissible_N(0.1) == 13.0);
    CHECK(illposedness_phase(13, 0.1) <= std::numbers::pi / 3);
    CHECK(illposedness_phase(12, 0.1) > std::numbers::pi / 3);
    try {
        illposedness_norm(12, -3, 0.1);
        FAIL("expected precondition_violated");
    } catch (const precondition_violated& e) {
        CHECK(e.min_admissible_N() == 13.0);
    }
    CHECK(illposedness_norm(64, -3, 0.1) == doctest::Approx(11.660658536138687).epsilon(1e-12));
    IllposednessOptions fine{64, 64};
    CHECK(illposedness_norm(64, -3, 0.1, fine) == doctest::Approx(11.660658536138687).epsilon(1e-12));
}

TEST_CASE("second Frechet derivative matches the profile on indicator data")
{
    // dxi = 1/64; both indicators get half weight at their endpoints
    const double N = 16, s = -2.5, eps = 0.1;
    const FrequencyGrid g(64 * std::numbers::pi, 2 * 1300 + 1);
    const double scale = std::pow(N, -s);
    auto indicator = [&](double lo, double hi) {
        return sample_spectrum(g, [&](double xi) -> complex {
            if (std::abs(xi - lo) < 1e-9 || std::abs(xi - hi) < 1e-9) return 0.5 * scale;
            return (xi > lo && xi < hi) ? scale : 0.0;
        });
    };
    const auto phi = indicator(-N, -N + 1), rho = indicator(N + 1, N + 2);
    const double t = std::pow(N, -(2 + eps));
    const auto d2 = frechet_second_derivative(phi, rho, t);
    for (int j = 0; j <= 64; ++j) {
        const double xi = 1.5 + j / 64.0;
        if (j == 32) continue;
        const complex v = d2[g.nearest_index(xi)];
        CHECK(v.imag() == 0.0);
        CHECK(std::abs(v) == doctest::Approx(8.0 / std::numbers::pi * illposedness_profile(N, s, eps, xi)).epsilon(1e-3));
    }
    CHECK(hs_norm(frechet_second_derivative(phi, rho, 0.0), 0) == 0.0);
    CHECK(hs_norm(frechet_second_derivative(SpectralField(g), rho, t), 0) == 0.0);
    CHECK_THROWS_AS(frechet_second_derivative(phi, SpectralField(FrequencyGrid(10, 21)), t), std::invalid_argument);
}

TEST_CASE("growth reports: gating and determinism")
{
    const std::vector<double> N{16, 32, 64, 128};
    auto power = [&](double e) {
        std::vector<double> v;
        for (double n : N) v.push_back(std::pow(n, e));
        return v;
    };
    auto r = bilinear_report(N, power(0.6), -0.5, 0.45); // predicted 0.55
    CHECK(r.gated);
    CHECK(r.pass);
    CHECK(r.fit.slope == doctest::Approx(0.6));
    r = bilinear_report(N, power(0.2), -0.5, 0.45);
    CHECK(r.gated);
    CHECK_FALSE(r.pass);
    r = bilinear_report(N, power(0.0), -0.25, 0.45); // predicted 0.05, inside the slack
    CHECK_FALSE(r.gated);
    CHECK(r.pass);
    r = illposedness_report(N, power(1.7), -3, 0.1); // predicted 1.8
    CHECK(r.gated);
    CHECK(r.pass);
    r = illposedness_report(N, power(1.0), -3, 0.1);
    CHECK_FALSE(r.pass);
    r = illposedness_report(N, power(-5.0), -1, 0.1);
    CHECK_FALSE(r.gated);
    CHECK(r.pass);

    auto wobble = power(0.6);
    wobble[1] *= 2.0;
    CHECK(bilinear_report(N, wobble, -0.5, 0.45).residual_flagged);
    CHECK_FALSE(bilinear_report(N, power(0.6), -0.5, 0.45).residual_flagged);

    CHECK_THROWS_AS(validate_ladder({16, 32, 64}), std::invalid_argument);
    CHECK_THROWS_AS(validate_ladder({16, 32, 32, 128}), std::invalid_argument);
    CHECK_THROWS_AS(validate_ladder({16, 20, 30, 100}), std::invalid_argument);

    const auto first = illposedness_slope({16, 32, 64, 128}, -3, 0.1);
    const auto second = illposedness_slope({16, 32, 64, 128}, -3, 0.1);
    CHECK(first.values == second.values);
}
