#include "bqlab/solver.hpp"

#include "bqlab/fit.hpp"
#include "bqlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace bq {

namespace {

constexpr double roundoff_floor = 1e-12;

using Rows = std::vector<std::vector<complex>>;

// Precomputed per-mode weights D[e][k][j] such that
//   int_0^{min(t_e, cap)} S(t_e - t', xi_k) F(t', xi_k) dt' = sum_j D[e][k][j] F(t_j, xi_k)
// for F interpolated through the nodes t_j.
class DuhamelMatrix {
public:
    DuhamelMatrix(const FrequencyGrid& grid, std::span<const double> nodes,
                  std::span<const double> eval_times, double cap, const DuhamelQuadrature& quad)
        : n_modes_(grid.size()), n_nodes_(static_cast<int>(nodes.size())),
          n_eval_(static_cast<int>(eval_times.size())),
          mat_(static_cast<std::size_t>(n_eval_) * n_modes_ * n_nodes_, 0.0)
    {
        if (nodes.empty()) throw std::invalid_argument("duhamel: empty node set");
        if (quad.panels < 1 || quad.order < 1)
            throw std::invalid_argument("duhamel: quadrature needs panels, order >= 1");
        const quad::BarycentricInterpolant interp({nodes.begin(), nodes.end()});
        const double gmax = gamma(grid.node(grid.size() - 1));
        const int m = grid.max_wavenumber();

        for (int e = 0; e < n_eval_; ++e) {
            const double t = eval_times[e];
            const double upper = std::min(t, cap);
            if (upper <= 0.0) continue;
            if (nodes.front() > 0.0 || upper > nodes.back() * (1.0 + 1e-14))
                throw std::invalid_argument("duhamel: history does not cover [0, t]");
            const int panels =
                std::max(quad.panels, static_cast<int>(std::ceil(gmax * upper / 4.0)));
            const auto rule = quad::composite_gauss_legendre(0.0, upper, panels, quad.order);
            const std::size_t nq = rule.nodes.size();
            std::vector<double> wb(nq * n_nodes_);
            for (std::size_t q = 0; q < nq; ++q) {
                const auto basis = interp.basis(rule.nodes[q]);
                for (int j = 0; j < n_nodes_; ++j) wb[q * n_nodes_ + j] = rule.weights[q] * basis[j];
            }
            // gamma is even, so modes k and -k share a row
            for (int i = m; i < n_modes_; ++i) {
                const double xi = grid.node(i);
                double* row = &mat_[(static_cast<std::size_t>(e) * n_modes_ + i) * n_nodes_];
                for (std::size_t q = 0; q < nq; ++q) {
                    const double kern = vs_multiplier(t - rule.nodes[q], xi);
                    const double* w = &wb[q * n_nodes_];
                    for (int j = 0; j < n_nodes_; ++j) row[j] += kern * w[j];
                }
                if (i != m) {
                    double* mirror =
                        &mat_[(static_cast<std::size_t>(e) * n_modes_ + (2 * m - i)) * n_nodes_];
                    std::copy(row, row + n_nodes_, mirror);
                }
            }
        }
    }

    // F is [node][mode] flattened; result is [eval][mode].
    Rows apply(std::span<const complex> F) const
    {
        Rows out(n_eval_, std::vector<complex>(n_modes_));
        for (int e = 0; e < n_eval_; ++e)
            for (int k = 0; k < n_modes_; ++k) {
                const double* row = &mat_[(static_cast<std::size_t>(e) * n_modes_ + k) * n_nodes_];
                complex acc = 0.0;
                for (int j = 0; j < n_nodes_; ++j)
                    acc += row[j] * F[static_cast<std::size_t>(j) * n_modes_ + k];
                out[e][k] = acc;
            }
        return out;
    }

private:
    int n_modes_;
    int n_nodes_;
    int n_eval_;
    std::vector<double> mat_;
};

std::vector<complex> flatten(const Rows& rows)
{
    std::vector<complex> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<complex> forcing(const FrequencyGrid& grid, const Rows& states, bool dealias)
{
    std::vector<complex> out;
    out.reserve(states.size() * grid.size());
    for (const auto& u : states) {
        const auto n = nonlinearity_spectrum(SpectralField(grid, u), dealias);
        out.insert(out.end(), n.coeffs.begin(), n.coeffs.end());
    }
    return out;
}

double sup_hs(const FrequencyGrid& grid, const Rows& rows, double s)
{
    double best = 0.0;
    for (const auto& r : rows) best = std::max(best, hs_norm(grid, r, s));
    return best;
}

double sup_hs_difference(const FrequencyGrid& grid, const Rows& a, const Rows& b, double s)
{
    double best = 0.0;
    std::vector<complex> d(grid.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        for (int k = 0; k < grid.size(); ++k) d[k] = a[m][k] - b[m][k];
        best = std::max(best, hs_norm(grid, d, s));
    }
    return best;
}

// X_{s,b} norm of a field given as u^(t_m, xi_k) on the space-time grid.
double xsb_of_samples(const SpaceTimeGrid& grid, const Rows& rows, double s, double b)
{
    return xsb_norm(SpaceTimeField(grid, dft_time_forward(grid, flatten(rows))), s, b);
}

} // namespace

std::vector<std::string> validate(const SolverConfig& c)
{
    std::vector<std::string> out;
    if (!(c.a > 0.25 && c.a < 0.5)) out.emplace_back("a must lie in (1/4, 1/2)");
    if (!(c.b > 0.5)) out.emplace_back("b must exceed 1/2");
    if (c.s < 0.0 && !(std::abs(c.s) < c.a / 2.0)) out.emplace_back("|s| < a/2 violated");
    // delta = 0 is accepted: the T^delta gain degenerates to 1 but the iteration is unchanged
    if (!(1.0 - (c.a + c.b) >= -1e-12)) out.emplace_back("delta = 1 - (a + b) must be >= 0");
    if (!(c.T > 0.0 && c.T <= 1.0)) out.emplace_back("T must lie in (0, 1]");
    if (c.n_times < 3) out.emplace_back("n_times must be >= 3");
    if (c.quadrature.panels < 1 || c.quadrature.order < 1)
        out.emplace_back("quadrature panels and order must be >= 1");
    if (c.max_iterations < 1) out.emplace_back("max_iterations must be >= 1");
    if (!(c.tolerance > 0.0)) out.emplace_back("tolerance must be positive");
    if (c.xsb_diagnostics && (c.diagnostic_n_times < 5 || c.diagnostic_n_times % 2 == 0))
        out.emplace_back("diagnostic_n_times must be odd and >= 5");
    return out;
}

SpectralField nonlinearity_spectrum(const SpectralField& u, bool dealias)
{
    const auto& grid = u.grid;
    const int m = grid.max_wavenumber();
    const int m_pad = dealias ? (3 * m + 1) / 2 : m;
    const FrequencyGrid big(grid.half_width(), 2 * m_pad + 1);

    std::vector<complex> padded(big.size(), 0.0);
    std::copy(u.coeffs.begin(), u.coeffs.end(), padded.begin() + (m_pad - m));
    auto samples = dft_inverse(big, padded);
    for (auto& v : samples) v *= v;
    const auto sq = dft_forward(big, samples);

    SpectralField out(grid);
    for (int i = 0; i < grid.size(); ++i) {
        const double xi = grid.node(i);
        out[i] = -xi * xi * sq[i + (m_pad - m)];
    }
    return out;
}

SpectralField duhamel_apply(const FrequencyGrid& grid, std::span<const double> nodes,
                            const std::vector<std::vector<complex>>& history, double t,
                            const DuhamelQuadrature& quad)
{
    if (history.size() != nodes.size())
        throw std::invalid_argument("duhamel_apply: history length does not match nodes");
    for (const auto& h : history)
        if (h.size() != static_cast<std::size_t>(grid.size()))
            throw std::invalid_argument("duhamel_apply: history entry does not match grid");
    if (t < 0.0) throw std::invalid_argument("duhamel_apply: t must be nonnegative");
    const double times[] = {t};
    const DuhamelMatrix D(grid, nodes, times, std::numeric_limits<double>::infinity(), quad);
    return SpectralField(grid, D.apply(flatten(history))[0]);
}

std::vector<complex> SolutionTrajectory::evaluate_at(double t) const
{
    if (forcing.empty()) throw std::logic_error("evaluate_at: no forcing history stored");
    if (t < 0.0 || t > T * (1.0 + 1e-14))
        throw std::invalid_argument("evaluate_at: t outside [0, T]");
    const double ts[] = {t};
    const DuhamelMatrix D(grid, times, ts, T, quadrature);
    const auto duh = D.apply(forcing)[0];
    auto lin = propagate(grid, initial, t).u;
    for (int k = 0; k < grid.size(); ++k) lin[k] -= duh[k];
    return lin;
}

SolutionTrajectory picard_solve(const InitialData& data, const SolverConfig& config)
{
    if (const auto diag = validate(config); !diag.empty()) {
        std::string msg = "picard_solve: invalid config:";
        for (const auto& d : diag) msg += " " + d + ";";
        throw std::invalid_argument(msg);
    }
    const auto& grid = data.grid();
    const double T = config.T;
    const double s = config.s;

    SolutionTrajectory out(grid);
    out.times = quad::chebyshev_lobatto(config.n_times, 0.0, T);
    out.T = T;
    out.initial = LinearState{data.phi_hat.coeffs, data.velocity()};
    out.quadrature = config.quadrature;

    Rows lin = linear_solve(grid, out.initial, out.times).states;
    const DuhamelMatrix D(grid, out.times, out.times, T, config.quadrature);

    Rows u = lin;
    for (int it = 1; it <= config.max_iterations; ++it) {
        Rows next = D.apply(forcing(grid, u, config.dealias));
        for (std::size_t m = 0; m < next.size(); ++m)
            for (int k = 0; k < grid.size(); ++k) next[m][k] = lin[m][k] - next[m][k];

        const double scale = sup_hs(grid, next, s);
        const double diff = scale > 0.0 ? sup_hs_difference(grid, next, u, s) / scale : 0.0;
        if (!out.differences.empty() && out.differences.back() > 0.0)
            out.ratios.push_back(diff / out.differences.back());
        out.differences.push_back(diff);
        out.iterations = it;
        u = std::move(next);

        if (!std::isfinite(diff))
            throw non_convergence("picard_solve: iterates became non-finite", out.differences);
        if (diff <= config.tolerance) {
            out.converged = true;
            break;
        }
        if (!out.ratios.empty() && out.ratios.back() > 1.0) {
            if (diff <= roundoff_floor) { // stagnation at roundoff
                out.converged = true;
                break;
            }
            std::ostringstream msg;
            msg << "picard_solve: iterate differences grew (ratio " << out.ratios.back()
                << ") at iteration " << it << "; data too large for T = " << T;
            throw non_convergence(msg.str(), out.differences);
        }
    }
    if (!out.converged)
        throw non_convergence("picard_solve: no convergence within max_iterations",
                              out.differences);

    {
        std::vector<double> idx, logd;
        for (std::size_t i = 0; i < out.differences.size(); ++i)
            if (out.differences[i] > roundoff_floor) {
                idx.push_back(static_cast<double>(i));
                logd.push_back(std::log(out.differences[i]));
            }
        out.fitted_ratio = idx.size() >= 2 ? std::exp(fit_line(idx, logd).slope) : 0.0;
    }

    out.forcing = forcing(grid, u, config.dealias);
    out.states = std::move(u);

    out.data_norm = hs_norm(data.phi_hat, s) + hs_norm(data.psi_hat, s - 1.0);
    if (config.xsb_diagnostics && out.data_norm > 0.0) {
        const double delta = 1.0 - (config.a + config.b);
        const double W = 2.0 * std::max(T, 1.0);
        const SpaceTimeGrid st(grid, -W, W, config.diagnostic_n_times);
        const auto ts = st.times();
        Rows lin_ext = linear_solve(grid, out.initial, ts).states;
        for (std::size_t m = 0; m < ts.size(); ++m)
            for (auto& v : lin_ext[m]) v *= theta(ts[m]);
        const double x_lin = xsb_of_samples(st, lin_ext, s, config.b);

        const DuhamelMatrix Dx(grid, out.times, ts, T, config.quadrature);
        auto localized = [&](std::span<const complex> F) {
            Rows d = Dx.apply(F);
            for (std::size_t m = 0; m < ts.size(); ++m)
                for (auto& v : d[m]) v *= theta_T(ts[m], T);
            return d;
        };
        const Rows duh1 = localized(forcing(grid, lin, config.dealias));
        const double x_duh1 = xsb_of_samples(st, duh1, s, config.b);

        out.c_linear = x_lin / out.data_norm;
        out.c_bilinear = x_lin > 0.0 ? x_duh1 / (std::pow(T, delta) * x_lin * x_lin) : 0.0;
        // the linear constant fixes the radius, the bilinear one drives the contraction
        out.radius = 2.0 * out.c_linear * out.data_norm;
        out.contraction_condition = 4.0 * out.c_bilinear * out.radius * std::pow(T, delta) < 1.0;

        Rows sol = localized(out.forcing);
        for (std::size_t m = 0; m < ts.size(); ++m)
            for (int k = 0; k < grid.size(); ++k) sol[m][k] = lin_ext[m][k] - sol[m][k];
        out.solution_xsb = xsb_of_samples(st, sol, s, config.b);
    }
    return out;
}

SolutionTrajectory reference_solve(const InitialData& data, double T, int n_steps,
                                   const ReferenceOptions& options)
{
    if (!(T > 0.0)) throw std::invalid_argument("reference_solve: T must be positive");
    if (n_steps < 1) throw std::invalid_argument("reference_solve: n_steps must be >= 1");
    const auto& grid = data.grid();
    const int n = grid.size();
    std::vector<double> g2(n);
    for (int k = 0; k < n; ++k) g2[k] = gamma(grid.node(k)) * gamma(grid.node(k));

    struct State {
        std::vector<complex> u, v;
    };
    auto rhs = [&](const State& y) {
        State d{y.v, std::vector<complex>(n)};
        std::vector<complex> nl(n, 0.0);
        if (options.nonlinear)
            nl = nonlinearity_spectrum(SpectralField(grid, y.u), options.dealias).coeffs;
        for (int k = 0; k < n; ++k) d.v[k] = -g2[k] * y.u[k] - nl[k];
        return d;
    };
    auto axpy = [&](const State& y, double h, const State& k) {
        State r = y;
        for (int i = 0; i < n; ++i) {
            r.u[i] += h * k.u[i];
            r.v[i] += h * k.v[i];
        }
        return r;
    };

    const double h = T / n_steps;
    SolutionTrajectory out(grid);
    out.T = T;
    out.initial = LinearState{data.phi_hat.coeffs, data.velocity()};
    State y{out.initial.u, out.initial.v};
    out.times.push_back(0.0);
    out.states.push_back(y.u);
    out.velocities.push_back(y.v);
    for (int step = 1; step <= n_steps; ++step) {
        const State k1 = rhs(y);
        const State k2 = rhs(axpy(y, h / 2, k1));
        const State k3 = rhs(axpy(y, h / 2, k2));
        const State k4 = rhs(axpy(y, h, k3));
        for (int i = 0; i < n; ++i) {
            y.u[i] += h / 6.0 * (k1.u[i] + 2.0 * k2.u[i] + 2.0 * k3.u[i] + k4.u[i]);
            y.v[i] += h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
        }
        const double norm = hs_norm(grid, y.u, 0.0);
        if (!std::isfinite(norm) || norm > options.blowup_bound)
            throw std::runtime_error("reference_solve: instability detected at step " +
                                     std::to_string(step));
        out.times.push_back(step * h);
        out.states.push_back(y.u);
        out.velocities.push_back(y.v);
    }
    out.converged = true;
    return out;
}

double lipschitz_probe(const InitialData& data1, const InitialData& data2,
                       const SolverConfig& config)
{
    if (!(data1.grid() == data2.grid()))
        throw std::invalid_argument("lipschitz_probe: data on different grids");
    const auto& grid = data1.grid();
    std::vector<complex> dphi(grid.size()), dpsi(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        dphi[k] = data1.phi_hat[k] - data2.phi_hat[k];
        dpsi[k] = data1.psi_hat[k] - data2.psi_hat[k];
    }
    const double a = hs_norm(grid, dphi, config.s);
    const double b = hs_norm(grid, dpsi, config.s - 1.0);
    const double denom = std::sqrt(a * a + b * b);
    if (denom == 0.0) return 0.0;

    SolverConfig c = config;
    c.xsb_diagnostics = false;
    const auto u1 = picard_solve(data1, c);
    const auto u2 = picard_solve(data2, c);
    return sup_hs_difference(grid, u1.states, u2.states, config.s) / denom;
}

double time_localization_exponent(double b, double b_prime, int sample_count,
                                  std::uint64_t seed)
{
    if (!(b_prime > -0.5 && b_prime <= 0.0 && 0.0 <= b && b <= b_prime + 1.0))
        throw std::invalid_argument(
            "time_localization_exponent: need -1/2 < b' <= 0 <= b <= b' + 1");
    if (sample_count < 1)
        throw std::invalid_argument("time_localization_exponent: sample_count must be >= 1");

    // time axis handled as a 1-D grid: "x" is t, the dual variable is tau
    const FrequencyGrid axis(4.0, 30375);
    const auto t = axis.positions();
    const std::vector<double> Ts = {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> freq(0.5, 8.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    double worst = std::numeric_limits<double>::infinity();
    for (int sample = 0; sample < sample_count; ++sample) {
        constexpr int terms = 6;
        double c[terms], w[terms], p[terms];
        for (int k = 0; k < terms; ++k) {
            c[k] = amp(rng);
            w[k] = freq(rng);
            p[k] = phase(rng);
        }
        // g = theta(t/2) * sum c cos(w t + p); theta(t/2) = 1 wherever theta_T is nonzero,
        // so the antiderivative there is elementary.
        auto g = [&](double x) {
            double v = 0.0;
            for (int k = 0; k < terms; ++k) v += c[k] * std::cos(w[k] * x + p[k]);
            return v;
        };
        auto G = [&](double x) {
            double v = 0.0;
            for (int k = 0; k < terms; ++k)
                v += c[k] * (std::sin(w[k] * x + p[k]) - std::sin(p[k])) / w[k];
            return v;
        };
        std::vector<complex> samples(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) samples[j] = theta(t[j] / 2.0) * g(t[j]);
        const double gnorm = hs_norm(axis, dft_forward(axis, samples), b_prime);
        if (gnorm == 0.0) continue;

        std::vector<double> q;
        for (double T : Ts) {
            for (std::size_t j = 0; j < t.size(); ++j) {
                const double cut = theta_T(t[j], T);
                samples[j] = cut == 0.0 ? 0.0 : cut * G(t[j]);
            }
            q.push_back(hs_norm(axis, dft_forward(axis, samples), b) / gnorm);
        }
        worst = std::min(worst, fit_loglog(Ts, q).slope);
    }
    if (!std::isfinite(worst))
        throw std::runtime_error("time_localization_exponent: all samples vanished");
    return worst;
}

} // namespace bq
