#pragma once

// Test-only helpers: a hand-rolled generator and independent oracles that
// do not share code with the library.

#include "bqlab/spectral.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace testing {

// splitmix64: small, fully specified, identical on every platform.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform(double lo = 0.0, double hi = 1.0)
    {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bq::complex cplx(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
};

// O(n^2) transform with the library's documented convention.
inline std::vector<bq::complex> naive_forward(const bq::FrequencyGrid& g,
                                              const std::vector<bq::complex>& f)
{
    std::vector<bq::complex> out(g.size());
    for (int k = 0; k < g.size(); ++k) {
        bq::complex s = 0.0;
        for (int j = 0; j < g.size(); ++j) {
            const double a = -g.node(k) * g.x(j);
            s += f[j] * bq::complex(std::cos(a), std::sin(a));
        }
        out[k] = g.dx() * s;
    }
    return out;
}

// Composite 20-point Gauss rule from Boost (independent node generation).
template <class F>
double boost_composite(F&& f, double a, double b, int panels)
{
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        sum += boost::math::quadrature::gauss<double, 20>::integrate(f, a + p * h, a + (p + 1) * h);
    return sum;
}

// Hermitian spectrum (real field) on g with a smooth random envelope.
inline std::vector<bq::complex> hermitian_spectrum(const bq::FrequencyGrid& g, Rng& rng,
                                                   double width, double amp = 1.0)
{
    std::vector<bq::complex> c(g.size());
    const int m = g.max_wavenumber();
    for (int k = 0; k <= m; ++k) {
        const double xi = g.node(m + k);
        const double env = amp * std::exp(-xi * xi / (2 * width * width));
        c[m + k] = env * bq::complex(rng.uniform(-1, 1), k == 0 ? 0.0 : rng.uniform(-1, 1));
        c[m - k] = std::conj(c[m + k]);
    }
    return c;
}

} // namespace testing
