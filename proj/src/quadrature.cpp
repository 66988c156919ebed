#include "finrank/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "finrank/error.hpp"

namespace finrank {

GaussRule gauss_legendre(int n, double a, double b)
{
    if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = mid - half * x;
        rule.nodes[hi] = mid + half * x;
        rule.weights[lo] = half * w;
        rule.weights[hi] = half * w;
    }
    return rule;
}

DiscRule disc_rule(cplx center, double radius, int radial_nodes, int angular_nodes)
{
    if (!(radius > 0.0)) throw InvalidArgument("disc radius must be positive");
    if (angular_nodes < 1) throw InvalidArgument("angular rule needs at least one node");
    const GaussRule radial = gauss_legendre(radial_nodes, 0.0, radius);
    const double dtheta = 2.0 * std::numbers::pi / angular_nodes;
    DiscRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(radial_nodes * angular_nodes));
    rule.weights.reserve(rule.nodes.capacity());
    for (std::size_t k = 0; k < radial.nodes.size(); ++k) {
        const double rho = radial.nodes[k];
        for (int t = 0; t < angular_nodes; ++t) {
            rule.nodes.push_back(center + std::polar(rho, dtheta * t));
            rule.weights.push_back(radial.weights[k] * rho * dtheta);
        }
    }
    return rule;
}

}  // namespace finrank
