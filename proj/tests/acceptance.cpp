// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.
// Usage: acceptance <path-to-bqlab-binary>

#include "bqlab/counterexample.hpp"
#include "bqlab/estimates.hpp"
#include "bqlab/fields.hpp"
#include "bqlab/propagators.hpp"
#include "bqlab/solver.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace bq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double uniform(std::mt19937_64& gen, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

double distance(const FrequencyGrid& g, const std::vector<complex>& u, const std::vector<complex>& v,
                double s)
{
    std::vector<complex> d(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) d[k] = u[k] - v[k];
    return hs_norm(g, d, s);
}

InitialData random_data(const FrequencyGrid& g, std::mt19937_64& gen, double amp)
{
    SpectralField phi(g), psi(g);
    const int m = g.max_wavenumber();
    for (int k = 0; k <= m; ++k) {
        const double xi = g.node(m + k);
        const double env = amp * std::exp(-xi * xi / 8.0);
        phi[m + k] = env * complex(uniform(gen, -1, 1), k ? uniform(gen, -1, 1) : 0.0);
        psi[m + k] = env * complex(uniform(gen, -1, 1), k ? uniform(gen, -1, 1) : 0.0);
        phi[m - k] = std::conj(phi[m + k]);
        psi[m - k] = std::conj(psi[m + k]);
    }
    return InitialData(phi, psi);
}

InitialData gaussian_data(const FrequencyGrid& g, double amp)
{
    auto phi = sample_spectrum(g, [&](double xi) {
        return complex(amp * std::sqrt(std::numbers::pi) * std::exp(-xi * xi / 4.0), 0.0);
    });
    return InitialData(phi, SpectralField(g));
}

// --- 1 ----------------------------------------------------------------------

Outcome linear_fidelity()
{
    const auto t0 = std::chrono::steady_clock::now();
    const FrequencyGrid g(20.0, 1025);
    std::mt19937_64 gen(1);
    const InitialData data = random_data(g, gen, 1.0);
    std::vector<double> times(101);
    for (int i = 0; i <= 100; ++i) times[i] = 0.1 * i;
    const double drift = energy_drift(linear_solve(data, times));

    const LinearState s0{data.phi_hat.coeffs, data.velocity()};
    double group = 0.0, scale = 0.0;
    for (double t : times) scale = std::max(scale, hs_norm(g, propagate(g, s0, t).u, 0));
    for (double t1 : {0.3, 1.7, 4.1, 6.0}) {
        const double t2 = 10.0 - t1;
        const auto twice = propagate(g, propagate(g, s0, t1), t2);
        const auto once = propagate(g, s0, t1 + t2);
        group = std::max(group, distance(g, twice.u, once.u, 0) / scale);
    }
    const double secs = seconds_since(t0);
    return {drift < 1e-10 && group < 1e-10 && secs < 5.0,
            "energy drift " + fmt("%.3g", drift) + ", group discrepancy " + fmt("%.3g", group) +
                ", " + fmt("%.2f", secs) + " s"};
}

// --- 2 ----------------------------------------------------------------------

Outcome picard_solver()
{
    const auto t0 = std::chrono::steady_clock::now();
    const FrequencyGrid g(20.0, 161);
    const InitialData data = gaussian_data(g, 1e-2);
    SolverConfig c;
    const auto sol = picard_solve(data, c);
    const auto ref = reference_solve(data, c.T, 2000);
    double err = 0.0;
    for (std::size_t m = 0; m < ref.times.size(); ++m)
        err = std::max(err, distance(g, sol.evaluate_at(ref.times[m]), ref.states[m], 0));
    const double secs = seconds_since(t0);
    return {sol.converged && sol.fitted_ratio < 0.9 && err < 1e-6 && secs < 60.0,
            "fitted ratio " + fmt("%.3g", sol.fitted_ratio) + ", reference error " + fmt("%.3g", err) +
                ", " + fmt("%.2f", secs) + " s"};
}

// --- 3 ----------------------------------------------------------------------

// Random field concentrated near the characteristic set |tau| = gamma(xi),
// where the embedding constant is approached.
SpaceTimeField embedding_field(const SpaceTimeGrid& st, std::mt19937_64& gen)
{
    SpaceTimeField F(st);
    const auto& g = st.space();
    const double width = uniform(gen, 0.3, 3.0);
    const double spread = uniform(gen, 0.5, 3.0);
    const double sign_mix = uniform(gen, 0.0, 1.0);
    for (int k = 0; k < g.size(); ++k) {
        const double xi = g.node(k);
        const complex ck(uniform(gen, -1, 1), uniform(gen, -1, 1));
        const double env = std::exp(-xi * xi / (2 * spread * spread));
        for (int j = 0; j < st.n_times(); ++j) {
            const double tau = st.tau(j);
            const double side = tau >= 0 ? sign_mix : 1.0 - sign_mix;
            const double d = (std::abs(tau) - bq::gamma(xi)) / width;
            F.at(j, k) = ck * env * side * std::exp(-0.5 * d * d);
        }
    }
    return F;
}

Outcome embedding()
{
    const SpaceTimeGrid st(FrequencyGrid(8.0, 65), -3.0, 3.0, 65);
    std::mt19937_64 gen(3);
    double max200 = 0.0, max400 = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double r = embedding_ratio(embedding_field(st, gen), 0.0, 0.6);
        if (i < 200) max200 = std::max(max200, r);
        max400 = std::max(max400, r);
    }
    const double change = max400 / max200 - 1.0;
    return {std::isfinite(max400) && change < 0.1,
            "max ratio " + fmt("%.5g", max200) + " (200 fields), " + fmt("%.5g", max400) +
                " (400 fields), change " + fmt("%.3g", change)};
}

// --- 4 ----------------------------------------------------------------------

Outcome norm_equivalence()
{
    std::mt19937_64 gen(4);
    double lo = 1.0, hi = 1.0, worst_excess = 0.0;
    int grids = 0;
    for (int trial = 0; trial < 24; ++trial) {
        const FrequencyGrid g(uniform(gen, 0.5, 40), 2 * static_cast<int>(uniform(gen, 3, 200)) + 1);
        const SpaceTimeGrid st(g, -uniform(gen, 0.2, 8), uniform(gen, 0.2, 8),
                               2 * static_cast<int>(uniform(gen, 3, 120)) + 1);
        ++grids;
        for (int j = 0; j < st.n_times(); ++j)
            for (int k = 0; k < g.size(); ++k) {
                const double r = modulation_weight_ratio(st.tau(j), g.node(k));
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        SpaceTimeField F(st);
        for (auto& v : F.coeffs) v = complex(uniform(gen, -1, 1), uniform(gen, -1, 1));
        const double s = uniform(gen, -1, 1), b = uniform(gen, -1, 1);
        const double ratio = xsb_norm(F, s, b) / xsb_norm_schrodinger(F, s, b);
        const double bound = std::pow(1.5, std::abs(b));
        worst_excess = std::max(worst_excess, std::max(ratio / bound, 1.0 / (ratio * bound)));
    }
    return {lo >= 2.0 / 3.0 && hi <= 1.5 && worst_excess <= 1.0 + 1e-12,
            std::to_string(grids) + " grids, weight ratios in [" + fmt("%.6f", lo) + ", " +
                fmt("%.6f", hi) + "], worst norm ratio / bound " + fmt("%.4f", worst_excess)};
}

// --- 5 ----------------------------------------------------------------------

Outcome calculus()
{
    double c1 = 0.0, c1_32 = 0.0;
    for (int d = 1; d <= 64; ++d) {
        const double v = est::ci1_value(0.0, d, 2, 2) * std::pow(bracket(d), 2);
        c1 = std::max(c1, v);
        if (d == 32) c1_32 = c1;
    }
    double inner = 0.0, outer = 0.0;
    for (int i = -40; i <= 40; ++i) {
        const double a0 = (i < 0 ? -1.0 : 1.0) * (i == 0 ? 0.0 : std::pow(10.0, std::abs(i) / 10.0));
        const double v = est::ci2_value(a0, 0, 1, 0.6);
        outer = std::max(outer, v);
        if (std::abs(a0) <= 100.0) inner = std::max(inner, v);
    }
    const double pi_err = std::abs(est::ci2_value(0, 0, 1, 1) - std::numbers::pi);
    const bool ok = std::isfinite(c1) && c1 / c1_32 < 1.05 && std::isfinite(outer) &&
                    outer <= 1.05 * inner && pi_err < 1e-8;
    return {ok, "ci1 constant " + fmt("%.6g", c1) + " (d <= 32: " + fmt("%.6g", c1_32) +
                    "), ci2 sup over |a0| <= 1e4 " + fmt("%.6g", outer) + " vs |a0| <= 100 " +
                    fmt("%.6g", inner) + ", |ci2 - pi| " + fmt("%.2g", pi_err)};
}

// --- 6 ----------------------------------------------------------------------

Outcome region_suprema()
{
    const auto t0 = std::chrono::steady_clock::now();
    est::EstimateParams p; // s = -0.2, a = 0.45, b = 0.55, ranges 1e2 .. 1e4
    bool ok = true;
    std::string detail;
    for (est::Region r : est::all_regions) {
        const est::RegionTag tag(r);
        const auto sup = est::region_supremum(tag, p);
        ok = ok && sup.growth < 2.0 && std::isfinite(sup.supremum);
        detail += tag.name() + " " + fmt("%.3f", sup.growth) + ", ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 600.0;
    return {ok, "growth: " + detail + fmt("%.0f", secs) + " s"};
}

// --- 7 ----------------------------------------------------------------------

Outcome bilinear_counterexample()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = bilinear_slope({16, 32, 64, 128}, -0.5, 0.45, 0.55);
    const double secs = seconds_since(t0);
    std::string vals;
    for (double v : rep.values) vals += fmt("%.5g", v) + " ";
    return {rep.fit.slope >= 0.55 - 0.2 && secs < 600.0,
            "B_N = " + vals + "slope " + fmt("%.4f", rep.fit.slope) + " (need >= 0.35), " +
                fmt("%.1f", secs) + " s"};
}

// --- 8 ----------------------------------------------------------------------

Outcome illposedness()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = illposedness_slope({32, 64, 128, 256}, -3.0, 0.1);

    // closed-form kernel against direct quadrature of the Duhamel time integral
    std::mt19937_64 gen(8);
    double kernel_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double N = std::floor(uniform(gen, 13, 257));
        const double t = std::pow(N, -2.1);
        const double xi = uniform(gen, 1.5, 2.5);
        const Interval dom = illposedness_domain(N, xi);
        const double xi1 = uniform(gen, dom.lo, dom.hi);
        const double A = bq::gamma(xi), B = bq::gamma(xi - xi1), C = bq::gamma(xi1);
        auto f = [&](double s) { return std::sin((t - s) * A) * std::cos(s * B) * std::cos(s * C); };
        double direct = 0.0;
        for (int p = 0; p < 8; ++p)
            direct += boost::math::quadrature::gauss<double, 30>::integrate(f, p * t / 8, (p + 1) * t / 8);
        kernel_err = std::max(kernel_err, std::abs(illposedness_kernel(t, xi, xi1) - direct) / std::abs(direct));
    }

    // xi = 3/2 + j/2^20 and integer N make every interval endpoint exact
    double min_measure = 1.0;
    for (double N : {32.0, 64.0, 128.0, 256.0})
        for (int j = 0; j <= (1 << 20); j += 7)
            min_measure = std::min(min_measure, illposedness_domain(N, 1.5 + std::ldexp(j, -20)).length());

    const double secs = seconds_since(t0);
    std::string vals;
    for (double v : rep.values) vals += fmt("%.6g", v) + " ";
    return {rep.fit.slope >= 1.8 - 0.2 && kernel_err < 1e-10 && min_measure >= 0.5 && secs < 300.0,
            "norms " + vals + "slope " + fmt("%.4f", rep.fit.slope) + " (need >= 1.6), kernel rel err " +
                fmt("%.2g", kernel_err) + ", min mes(A_xi) " + fmt("%.6g", min_measure) + ", " +
                fmt("%.1f", secs) + " s"};
}

// --- 9 ----------------------------------------------------------------------

Outcome lipschitz()
{
    const FrequencyGrid g(20.0, 161);
    const InitialData base = gaussian_data(g, 1e-2);
    SolverConfig c;
    c.xsb_diagnostics = false;
    std::mt19937_64 gen(9);
    double worst_drift = 0.0, max_ratio = 0.0, min_ratio = 1e300;
    for (int dir = 0; dir < 20; ++dir) {
        const InitialData d = random_data(g, gen, 1.0);
        const double size = std::hypot(hs_norm(d.phi_hat, 0), hs_norm(d.psi_hat, -1));
        std::vector<double> ratios;
        for (double h : {1e-4, 1e-5}) {
            const double k = h * 1e-2 / size;
            SpectralField phi(g), psi(g);
            for (int i = 0; i < g.size(); ++i) {
                phi[i] = base.phi_hat[i] + k * d.phi_hat[i];
                psi[i] = base.psi_hat[i] + k * d.psi_hat[i];
            }
            ratios.push_back(lipschitz_probe(base, InitialData(phi, psi), c));
        }
        worst_drift = std::max(worst_drift, std::abs(ratios[1] / ratios[0] - 1.0));
        max_ratio = std::max({max_ratio, ratios[0], ratios[1]});
        min_ratio = std::min({min_ratio, ratios[0], ratios[1]});
    }
    return {std::isfinite(max_ratio) && worst_drift < 0.05,
            "20 directions, ratios in [" + fmt("%.5g", min_ratio) + ", " + fmt("%.5g", max_ratio) +
                "], max drift under 10x shrink " + fmt("%.3g", worst_drift)};
}

// --- 10 ---------------------------------------------------------------------

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const std::string& cli)
{
    struct Run {
        std::string kind;
        std::string args;
        std::string second_args; // extra options only for the second run
    };
    const std::vector<Run> runs = {
        {"solve", "--reference-steps 200", ""},
        {"linear-demo", "--data random --modes 129 --samples 11 --seed 5", ""},
        {"bilinear-sweep", "--s -0.5 --n-alpha 16 --short-cells 16", "--workers 2"},
        {"illposed-sweep", "--s -3 --ladder 32,64,128,256", "--workers 2"},
        {"estimate-audit", "--range-max 400 --samples-per-level 8 --seed 3", "--workers 2"},
    };
    const fs::path root = fs::temp_directory_path() / "bqlab_acceptance_determinism";
    fs::remove_all(root);
    bool ok = true;
    std::string detail;
    for (const auto& r : runs) {
        std::string csv[2];
        for (int i = 0; i < 2; ++i) {
            const fs::path dir = root / (r.kind + "_" + std::to_string(i));
            const std::string cmd = "\"" + cli + "\" " + r.kind + " " + r.args +
                                    (i == 1 ? " " + r.second_args : "") + " --out \"" +
                                    dir.string() + "\" > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) == 2) {
                ok = false;
                detail += r.kind + " failed to run; ";
            }
            csv[i] = read_file(dir / (r.kind + ".csv"));
        }
        const bool same = !csv[0].empty() && csv[0] == csv[1];
        ok = ok && same;
        detail += r.kind + (same ? " identical" : " DIFFERS") + "; ";
    }
    return {ok, detail};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-bqlab>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"linear propagator fidelity", linear_fidelity},
        {"Picard solver convergence and reference agreement", picard_solver},
        {"X_{s,b} embedding constant", embedding},
        {"modulation weight and norm equivalence", norm_equivalence},
        {"calculus oracles", calculus},
        {"region suprema range stability", region_suprema},
        {"bilinear counterexample slope", bilinear_counterexample},
        {"ill-posedness slope, kernel and A_xi measure", illposedness},
        {"Lipschitz probe", lipschitz},
        {"CLI determinism", [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": "
                  << criteria[i].first << " -- " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
