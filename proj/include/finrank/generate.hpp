#pragma once

#include <cstdint>

#include "finrank/measure.hpp"

namespace finrank {

struct GenerateOptions {
    std::size_t dimension = 1;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    double separation = 0.1;
    double radius = 2.0;       // |zeta| <= radius (Euclidean norm in C^d)
    double min_weight = 0.5;   // |lambda| in [min_weight, max_weight]
    double max_weight = 2.0;
    int max_attempts = 10000;
};

/// Random atoms with pairwise distance >= separation, locations uniform in
/// the ball of the given radius and complex weights of uniform modulus and
/// phase. Deterministic in the seed; throws InvalidArgument when the
/// separation cannot be met within max_attempts draws.
DiscreteMeasure random_measure(const GenerateOptions& options);

/// Degree-1 polynomial c_0 + sum_j c_j z_j with standard complex Gaussian
/// coefficients.
Polynomial random_linear_polynomial(std::size_t dimension, std::uint64_t seed);

/// Degree-1 polynomial vanishing at `root`.
Polynomial linear_vanishing_at(const ComplexPoint& root, std::uint64_t seed);

/// Measure whose projection dropping the first coordinate has a cancelling
/// fibre: two atoms share z' and carry opposite weights. A few generic atoms
/// are added around them. Deterministic in the seed.
DiscreteMeasure cancellation_measure(std::size_t dimension, std::uint64_t seed);

}  // namespace finrank
