#include "finrank/generate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "finrank/error.hpp"

namespace finrank {

namespace {

ComplexPoint ball_point(std::mt19937_64& rng, std::size_t d, double radius)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<cplx> z(d);
    double norm2 = 0.0;
    for (auto& c : z) {
        const double re = normal(rng);
        const double im = normal(rng);
        c = cplx{re, im};
        norm2 += std::norm(c);
    }
    const double r = radius * std::pow(unit(rng), 1.0 / (2.0 * static_cast<double>(d)));
    const double s = norm2 > 0.0 ? r / std::sqrt(norm2) : 0.0;
    for (auto& c : z) c *= s;
    return ComplexPoint(std::move(z));
}

cplx random_weight(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> mod(lo, hi);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double m = mod(rng);
    return std::polar(m, phase(rng));
}

}  // namespace

DiscreteMeasure random_measure(const GenerateOptions& o)
{
    if (o.dimension == 0) throw InvalidArgument("dimension must be at least 1");
    if (!(o.separation > 0.0)) throw InvalidArgument("separation must be positive");
    if (!(o.min_weight > 0.0 && o.max_weight >= o.min_weight)) throw InvalidArgument("invalid weight range");
    std::mt19937_64 rng(o.seed);
    std::vector<Atom> atoms;
    int attempts = 0;
    while (atoms.size() < o.count) {
        if (++attempts > o.max_attempts) {
            throw InvalidArgument("infeasible separation: could not place atoms within the attempt budget");
        }
        ComplexPoint z = ball_point(rng, o.dimension, o.radius);
        bool ok = true;
        for (const auto& a : atoms) {
            if (distance(a.location, z) < o.separation) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        atoms.push_back({std::move(z), random_weight(rng, o.min_weight, o.max_weight)});
    }
    return DiscreteMeasure(o.dimension, std::move(atoms));
}

Polynomial random_linear_polynomial(std::size_t dimension, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] {
        const double re = normal(rng);
        const double im = normal(rng);
        return cplx{re, im};
    };
    std::map<MultiIndex, cplx> terms;
    terms[MultiIndex::zero(dimension)] = draw();
    for (std::size_t j = 0; j < dimension; ++j) terms[MultiIndex::unit(dimension, j)] = draw();
    return Polynomial(dimension, std::move(terms));
}

Polynomial linear_vanishing_at(const ComplexPoint& root, std::uint64_t seed)
{
    const std::size_t d = root.dimension();
    Polynomial l = random_linear_polynomial(d, seed);
    std::map<MultiIndex, cplx> terms;
    cplx constant{0.0, 0.0};
    for (std::size_t j = 0; j < d; ++j) {
        const auto e = MultiIndex::unit(d, j);
        const cplx c = l.terms().count(e) ? l.terms().at(e) : cplx{1.0, 0.0};
        terms[e] = c;
        constant -= c * root[j];
    }
    terms[MultiIndex::zero(d)] = constant;
    return Polynomial(d, std::move(terms));
}

DiscreteMeasure cancellation_measure(std::size_t dimension, std::uint64_t seed)
{
    if (dimension < 2) throw InvalidArgument("cancellation needs dimension at least 2");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> extra(0, 2);
    const int n_extra = extra(rng);
    // The cancelling pair differs only in z_1.
    const ComplexPoint shared = ball_point(rng, dimension - 1, 1.2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const cplx z1a = std::polar(0.4 + 0.8 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
    cplx z1b = std::polar(0.4 + 0.8 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
    if (std::abs(z1b - z1a) < 0.3) z1b = -z1a;
    const cplx lambda = random_weight(rng, 0.5, 2.0);

    auto with_first = [&](cplx z1) {
        std::vector<cplx> z{z1};
        z.insert(z.end(), shared.coords().begin(), shared.coords().end());
        return ComplexPoint(std::move(z));
    };
    std::vector<Atom> atoms{{with_first(z1a), lambda}, {with_first(z1b), -lambda}};
    int attempts = 0;
    while (static_cast<int>(atoms.size()) < 2 + n_extra && ++attempts < 10000) {
        ComplexPoint z = ball_point(rng, dimension, 1.8);
        bool ok = true;
        for (const auto& a : atoms) {
            if (distance(a.location, z) < 0.3) ok = false;
        }
        if (ok) atoms.push_back({std::move(z), random_weight(rng, 0.5, 2.0)});
    }
    return DiscreteMeasure(dimension, std::move(atoms));
}

}  // namespace finrank
