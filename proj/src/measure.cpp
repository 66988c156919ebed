#include "finrank/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "finrank/error.hpp"

namespace finrank {

ComplexPoint::ComplexPoint(std::vector<cplx> coords) : coords_(std::move(coords))
{
    if (coords_.empty()) throw InvalidArgument("a point needs at least one coordinate");
    for (const auto& c : coords_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidArgument("point coordinates must be finite");
        }
    }
}

ComplexPoint::ComplexPoint(std::initializer_list<cplx> coords)
    : ComplexPoint(std::vector<cplx>(coords))
{
}

ComplexPoint ComplexPoint::drop(std::size_t axis) const
{
    if (axis >= coords_.size()) throw InvalidArgument("axis out of range");
    std::vector<cplx> c(coords_);
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(axis));
    return ComplexPoint(std::move(c));
}

double ComplexPoint::norm() const
{
    double s = 0.0;
    for (const auto& c : coords_) s += std::norm(c);
    return std::sqrt(s);
}

double distance(const ComplexPoint& a, const ComplexPoint& b)
{
    if (a.dimension() != b.dimension()) throw InvalidArgument("point dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

cplx monomial(const ComplexPoint& z, const MultiIndex& alpha)
{
    if (z.dimension() != alpha.dimension()) throw InvalidArgument("monomial dimension mismatch");
    cplx r{1.0, 0.0};
    for (std::size_t j = 0; j < z.dimension(); ++j) {
        for (int p = 0; p < alpha[j]; ++p) r *= z[j];
    }
    return r;
}

DiscreteMeasure::DiscreteMeasure(std::size_t dimension, std::vector<Atom> atoms)
    : dimension_(dimension)
{
    if (dimension == 0) throw InvalidArgument("dimension must be at least 1");
    for (auto& a : atoms) {
        if (a.location.dimension() != dimension) {
            throw InvalidArgument("atom location dimension does not match the measure");
        }
        auto same = std::find_if(atoms_.begin(), atoms_.end(),
                                 [&](const Atom& b) { return b.location == a.location; });
        if (same != atoms_.end()) {
            same->weight += a.weight;
        } else {
            atoms_.push_back(std::move(a));
        }
    }
    std::erase_if(atoms_, [](const Atom& a) { return a.weight == cplx{0.0, 0.0}; });
}

cplx DiscreteMeasure::total_mass() const
{
    cplx s{0.0, 0.0};
    for (const auto& a : atoms_) s += a.weight;
    return s;
}

bool DiscreteMeasure::has_real_weights() const
{
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const Atom& a) { return a.weight.imag() == 0.0; });
}

Polydisk::Polydisk(ComplexPoint center, std::vector<double> radii)
    : center_(std::move(center)), radii_(std::move(radii))
{
    if (radii_.size() != center_.dimension()) {
        throw InvalidArgument("polydisk radii must match the center dimension");
    }
    for (double r : radii_) {
        if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("polydisk radii must be positive");
    }
}

Polydisk Polydisk::unit(std::size_t dimension)
{
    return Polydisk(ComplexPoint(std::vector<cplx>(dimension)), std::vector<double>(dimension, 1.0));
}

bool Polydisk::contains(const ComplexPoint& z) const
{
    if (z.dimension() != dimension()) return false;
    for (std::size_t j = 0; j < dimension(); ++j) {
        if (std::abs(z[j] - center_[j]) >= radii_[j]) return false;
    }
    return true;
}

Polynomial::Polynomial(std::size_t dimension, std::map<MultiIndex, cplx> terms)
    : dimension_(dimension), terms_(std::move(terms))
{
    if (dimension == 0) throw InvalidArgument("dimension must be at least 1");
    for (const auto& [alpha, c] : terms_) {
        if (alpha.dimension() != dimension) throw InvalidArgument("polynomial term dimension mismatch");
    }
    std::erase_if(terms_, [](const auto& t) { return t.second == cplx{0.0, 0.0}; });
}

Polynomial Polynomial::constant(std::size_t dimension, cplx value)
{
    return Polynomial(dimension, {{MultiIndex::zero(dimension), value}});
}

Polynomial Polynomial::coordinate(std::size_t dimension, std::size_t axis)
{
    return Polynomial(dimension, {{MultiIndex::unit(dimension, axis), cplx{1.0, 0.0}}});
}

int Polynomial::degree() const
{
    int deg = 0;
    for (const auto& [alpha, c] : terms_) deg = std::max(deg, alpha.degree());
    return deg;
}

cplx Polynomial::operator()(const ComplexPoint& z) const
{
    if (z.dimension() != dimension_) throw InvalidArgument("polynomial evaluated at point of wrong dimension");
    cplx s{0.0, 0.0};
    for (const auto& [alpha, c] : terms_) s += c * monomial(z, alpha);
    return s;
}

DensitySpec DensitySpec::gaussian(double scale)
{
    if (!(scale > 0.0)) throw InvalidArgument("gaussian scale must be positive");
    DensitySpec s;
    s.kind = DensityKind::gaussian;
    s.scale = scale;
    return s;
}

DensitySpec DensitySpec::polynomial(Polynomial p)
{
    DensitySpec s;
    s.kind = DensityKind::polynomial;
    s.poly = std::move(p);
    return s;
}

std::string to_string(DensityKind kind)
{
    switch (kind) {
    case DensityKind::uniform: return "uniform";
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::polynomial: return "polynomial";
    }
    return "unknown";
}

DensityMeasure::DensityMeasure(Polydisk domain, DensitySpec density)
    : domain_(std::move(domain)), density_(std::move(density))
{
    if (density_.kind == DensityKind::polynomial && density_.poly.dimension() != domain_.dimension()) {
        throw InvalidArgument("density polynomial dimension does not match the domain");
    }
}

cplx DensityMeasure::operator()(const ComplexPoint& z) const
{
    switch (density_.kind) {
    case DensityKind::uniform:
        return {1.0, 0.0};
    case DensityKind::gaussian: {
        double r2 = 0.0;
        for (std::size_t j = 0; j < z.dimension(); ++j) r2 += std::norm(z[j] - domain_.center()[j]);
        return {std::exp(-r2 / (2.0 * density_.scale * density_.scale)), 0.0};
    }
    case DensityKind::polynomial:
        return density_.poly(z);
    }
    return {0.0, 0.0};
}

DiscreteMeasure pushforward_drop_coord(const DiscreteMeasure& m, std::size_t axis)
{
    if (m.dimension() < 2) throw InvalidArgument("cannot project below dimension 1");
    if (axis >= m.dimension()) throw InvalidArgument("projection axis out of range");
    std::vector<Atom> projected;
    projected.reserve(m.size());
    for (const auto& a : m.atoms()) projected.push_back({a.location.drop(axis), a.weight});
    return DiscreteMeasure(m.dimension() - 1, std::move(projected));
}

DiscreteMeasure weight_by_g(const DiscreteMeasure& m, const Polynomial& g)
{
    if (g.dimension() != m.dimension()) throw InvalidArgument("weight dimension does not match the measure");
    std::vector<Atom> out;
    for (const auto& a : m.atoms()) {
        const double w = std::norm(g(a.location));
        if (w != 0.0) out.push_back({a.location, w * a.weight});
    }
    return DiscreteMeasure(m.dimension(), std::move(out));
}

double unitarity_deviation(const CMatrix& u)
{
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

DiscreteMeasure rotate_unitary(const DiscreteMeasure& m, const CMatrix& u)
{
    if (u.rows() != static_cast<Eigen::Index>(m.dimension()) || u.cols() != u.rows()) {
        throw InvalidArgument("rotation matrix dimension does not match the measure");
    }
    const double dev = unitarity_deviation(u);
    if (!(dev <= kUnitaryTolerance)) {
        std::ostringstream msg;
        msg << "matrix is not unitary: deviation ||U*U - I||_F = " << dev;
        throw InvalidArgument(msg.str());
    }
    const auto d = m.dimension();
    std::vector<Atom> out;
    out.reserve(m.size());
    for (const auto& a : m.atoms()) {
        std::vector<cplx> w(d, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                w[i] += u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * a.location[j];
            }
        }
        out.push_back({ComplexPoint(std::move(w)), a.weight});
    }
    return DiscreteMeasure(d, std::move(out));
}

CMatrix random_unitary(std::size_t dimension, std::uint64_t seed)
{
    if (dimension == 0) throw InvalidArgument("dimension must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(dimension);
    CMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx{re, im};
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const cplx rjj = r(j, j);
        const double mod = std::abs(rjj);
        if (mod > 0.0) q.col(j) *= rjj / mod;
    }
    // One Gram-Schmidt sweep brings the deviation down to a few ulps.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
        q.col(j) /= q.col(j).norm();
    }
    return q;
}

Polynomial perturb_weight(std::uint64_t seed, double epsilon, std::size_t dimension)
{
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (dimension == 0) throw InvalidArgument("dimension must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto coefficient = [&] {
        const double mod = unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        return std::polar(mod, phase);
    };
    std::map<MultiIndex, cplx> terms;
    terms[MultiIndex::zero(dimension)] = cplx{1.0, 0.0} + epsilon * coefficient();
    for (std::size_t j = 0; j < dimension; ++j) {
        terms[MultiIndex::unit(dimension, j)] = epsilon * coefficient();
    }
    return Polynomial(dimension, std::move(terms));
}

}  // namespace finrank
