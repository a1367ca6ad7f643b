#include "bqlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace bq::quad {

Rule gauss_legendre(int order, double a, double b)
{
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    Rule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

Rule composite_gauss_legendre(double a, double b, int panels, int order)
{
    if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
    Rule out;
    out.nodes.reserve(static_cast<std::size_t>(panels) * order);
    out.weights.reserve(static_cast<std::size_t>(panels) * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const Rule r = gauss_legendre(order, a + p * h, a + (p + 1) * h);
        out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
        out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
    }
    return out;
}

std::vector<double> chebyshev_lobatto(int n, double a, double b)
{
    if (n < 2) throw std::invalid_argument("chebyshev_lobatto: need at least 2 points");
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        const double c = -std::cos(std::numbers::pi * j / (n - 1));
        out[j] = 0.5 * (a + b) + 0.5 * (b - a) * c;
    }
    out.front() = a;
    out.back() = b;
    return out;
}

BarycentricInterpolant::BarycentricInterpolant(std::vector<double> nodes)
    : nodes_(std::move(nodes)), weights_(nodes_.size(), 1.0)
{
    if (nodes_.empty()) throw std::invalid_argument("BarycentricInterpolant: no nodes");
    // weights computed in a rescaled variable to keep the products O(1)
    const double lo = nodes_.front(), hi = nodes_.back();
    const double scale = (nodes_.size() > 1 && hi > lo) ? 4.0 / (hi - lo) : 1.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        double w = 1.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k)
            if (k != j) w *= scale * (nodes_[j] - nodes_[k]);
        weights_[j] = 1.0 / w;
    }
}

std::vector<double> BarycentricInterpolant::basis(double x) const
{
    const std::size_t n = nodes_.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (x == nodes_[j]) {
            out[j] = 1.0;
            return out;
        }
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = weights_[j] / (x - nodes_[j]);
        denom += out[j];
    }
    for (auto& v : out) v /= denom;
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double* error)
{
    if (a == b) {
        if (error) *error = 0.0;
        return 0.0;
    }
    // Globally adaptive: always bisect the panel with the largest error
    // estimate, using the 7/15 Gauss-Kronrod pair on each panel.
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Panel {
        double a, b, value, err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    auto rule = [&](double lo, double hi) {
        double err = 0.0;
        const double v = gk::integrate(f, lo, hi, 0, 0.0, &err);
        return Panel{lo, hi, v, err};
    };
    constexpr int max_panels = 4000;
    std::priority_queue<Panel> heap;
    heap.push(rule(a, b));
    double total = heap.top().value, total_err = heap.top().err;
    for (int n = 1; n < max_panels; ++n) {
        if (total_err <= rel_tol * std::abs(total) || total_err <= 1e-300) break;
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break; // panel at machine resolution
        heap.pop();
        const Panel left = rule(worst.a, mid), right = rule(mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of the running totals
    total = 0.0;
    total_err = 0.0;
    for (; !heap.empty(); heap.pop()) {
        total += heap.top().value;
        total_err += heap.top().err;
    }
    if (error) *error = total_err;
    return total;
}

double integrate_tail(const std::function<double(double)>& f, double a, double decay,
                      double tail_tol, double rel_tol)
{
    if (!(decay > 1.0)) throw std::invalid_argument("integrate_tail: decay must exceed 1");
    const double excess = decay - 1.0;
    const double u_max = std::log(1.0 / (tail_tol * excess)) / excess;
    auto g = [&](double u) {
        const double e = std::exp(u);
        return f(a + e - 1.0) * e;
    };
    // split the u-range so the early, feature-rich part gets its own panels
    double sum = 0.0;
    double lo = 0.0;
    for (double hi : {1.0, 4.0, 16.0, 64.0, 256.0}) {
        const double top = std::min(hi, u_max);
        if (top > lo) sum += integrate(g, lo, top, rel_tol);
        lo = top;
        if (lo >= u_max) break;
    }
    if (u_max > lo) sum += integrate(g, lo, u_max, rel_tol);
    return sum;
}

} // namespace bq::quad
