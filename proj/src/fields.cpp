#include "bqlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bq {

namespace {

void require_finite(const std::vector<complex>& c, const char* what)
{
    for (const auto& v : c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
}

template <class Modulation>
double weighted_norm(const SpaceTimeField& F, double s, double b, Modulation&& modulation)
{
    const auto& g = F.grid;
    const int nx = g.space().size();
    std::vector<double> spatial(nx);
    for (int k = 0; k < nx; ++k) spatial[k] = std::pow(bracket(g.space().node(k)), 2.0 * s);
    double sum = 0.0;
    for (int j = 0; j < g.n_times(); ++j) {
        const double tau = std::abs(g.tau(j));
        for (int k = 0; k < nx; ++k) {
            const double m = bracket(tau - modulation(g.space().node(k)));
            sum += std::pow(m, 2.0 * b) * spatial[k] * std::norm(F.at(j, k));
        }
    }
    return std::sqrt(sum * g.dtau() * g.space().spacing());
}

} // namespace

SpectralField::SpectralField(FrequencyGrid g) : grid(g), coeffs(g.size()) {}

SpectralField::SpectralField(FrequencyGrid g, std::vector<complex> c)
    : grid(g), coeffs(std::move(c))
{
    if (coeffs.size() != static_cast<std::size_t>(grid.size()))
        throw std::invalid_argument("SpectralField: coefficient count does not match grid");
    require_finite(coeffs, "SpectralField");
}

SpaceTimeField::SpaceTimeField(SpaceTimeGrid g)
    : grid(g), coeffs(static_cast<std::size_t>(g.n_times()) * g.space().size())
{
}

SpaceTimeField::SpaceTimeField(SpaceTimeGrid g, std::vector<complex> c)
    : grid(g), coeffs(std::move(c))
{
    if (coeffs.size() != static_cast<std::size_t>(grid.n_times()) * grid.space().size())
        throw std::invalid_argument("SpaceTimeField: coefficient count does not match grid");
    require_finite(coeffs, "SpaceTimeField");
}

double hs_norm(const FrequencyGrid& grid, std::span<const complex> coeffs, double s)
{
    if (coeffs.size() != static_cast<std::size_t>(grid.size()))
        throw std::invalid_argument("hs_norm: coefficient count does not match grid");
    double sum = 0.0;
    for (int i = 0; i < grid.size(); ++i)
        sum += std::pow(bracket(grid.node(i)), 2.0 * s) * std::norm(coeffs[i]);
    return std::sqrt(sum * grid.spacing());
}

double hs_norm(const SpectralField& f, double s) { return hs_norm(f.grid, f.coeffs, s); }

double xsb_norm(const SpaceTimeField& F, double s, double b)
{
    return weighted_norm(F, s, b, [](double xi) { return gamma(xi); });
}

double xsb_norm_schrodinger(const SpaceTimeField& F, double s, double b)
{
    return weighted_norm(F, s, b, [](double xi) { return xi * xi; });
}

double modulation_weight_ratio(double tau, double xi)
{
    const double t = std::abs(tau);
    return bracket(t - xi * xi) / bracket(t - gamma(xi));
}

double embedding_ratio(const SpaceTimeField& F, double s, double b)
{
    if (!(b > 0.5)) throw std::invalid_argument("embedding_ratio: requires b > 1/2");
    const double denom = xsb_norm(F, s, b);
    if (denom == 0.0) return 0.0;
    const auto& g = F.grid;
    const int nx = g.space().size();
    const auto u = dft_time_inverse(g, F.coeffs);
    double best = 0.0;
    for (int m = 0; m < g.n_times(); ++m) {
        std::span<const complex> row(u.data() + static_cast<std::size_t>(m) * nx, nx);
        best = std::max(best, hs_norm(g.space(), row, s));
    }
    return best / denom;
}

} // namespace bq
