#pragma once

#include <functional>
#include <vector>

namespace bq::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    double apply(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// Gauss-Legendre rule of the given order on [a, b] (default [-1, 1]).
Rule gauss_legendre(int order, double a = -1.0, double b = 1.0);

/// `panels` equal panels on [a, b], each carrying an `order`-point Gauss rule.
Rule composite_gauss_legendre(double a, double b, int panels, int order);

/// Chebyshev-Gauss-Lobatto points on [a, b], ascending, endpoints included.
std::vector<double> chebyshev_lobatto(int n, double a, double b);

/// Barycentric Lagrange interpolation on a fixed node set.
class BarycentricInterpolant {
public:
    explicit BarycentricInterpolant(std::vector<double> nodes);

    const std::vector<double>& nodes() const { return nodes_; }

    /// Values of all Lagrange basis polynomials at x.
    std::vector<double> basis(double x) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval; stops at
/// rel_tol or after 4000 panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double* error = nullptr);

/// Integral over [a, inf) of an integrand decaying like x^(-decay), decay > 1.
/// The substitution x = a + exp(u) - 1 turns the algebraic tail into an
/// exponential one; the u-range is truncated where the remainder bound
/// exp(-u (decay - 1)) / (decay - 1) drops below `tail_tol`.
double integrate_tail(const std::function<double(double)>& f, double a, double decay,
                      double tail_tol = 1e-12, double rel_tol = 1e-12);

} // namespace bq::quad
