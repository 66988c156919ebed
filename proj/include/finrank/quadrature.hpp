#pragma once

#include <vector>

#include "finrank/types.hpp"

namespace finrank {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Nodes and weights of the polar product rule on the disc |z - c| <= r:
/// Gauss-Legendre in the radius (with the Jacobian rho folded into the
/// weights) times the trapezoid rule in the angle.
struct DiscRule {
    std::vector<cplx> nodes;
    std::vector<double> weights;
};

DiscRule disc_rule(cplx center, double radius, int radial_nodes, int angular_nodes);

}  // namespace finrank
