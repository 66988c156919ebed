#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "finrank/multi_index.hpp"
#include "finrank/types.hpp"

namespace finrank {

/// A point z = (z_1, ..., z_d) of C^d with finite coordinates.
class ComplexPoint {
public:
    ComplexPoint() = default;
    explicit ComplexPoint(std::vector<cplx> coords);
    ComplexPoint(std::initializer_list<cplx> coords);

    std::size_t dimension() const { return coords_.size(); }
    const cplx& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<cplx>& coords() const { return coords_; }

    ComplexPoint drop(std::size_t axis) const;
    double norm() const;

    bool operator==(const ComplexPoint&) const = default;

private:
    std::vector<cplx> coords_;
};

double distance(const ComplexPoint& a, const ComplexPoint& b);

/// z^alpha by repeated multiplication.
cplx monomial(const ComplexPoint& z, const MultiIndex& alpha);

struct Atom {
    ComplexPoint location;
    cplx weight;
};

/// Finite complex combination of point masses. Atoms at identical locations
/// are merged by summing weights; zero weights are dropped.
class DiscreteMeasure {
public:
    explicit DiscreteMeasure(std::size_t dimension, std::vector<Atom> atoms = {});

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    cplx total_mass() const;
    bool has_real_weights() const;

private:
    std::size_t dimension_;
    std::vector<Atom> atoms_;
};

/// Product of discs |z_j - c_j| < r_j.
class Polydisk {
public:
    Polydisk(ComplexPoint center, std::vector<double> radii);
    static Polydisk unit(std::size_t dimension);

    std::size_t dimension() const { return center_.dimension(); }
    const ComplexPoint& center() const { return center_; }
    const std::vector<double>& radii() const { return radii_; }

    bool contains(const ComplexPoint& z) const;  // open polydisk

private:
    ComplexPoint center_;
    std::vector<double> radii_;
};

/// Polynomial p(z) = sum_alpha c_alpha z^alpha on C^d. Serves both as the
/// reweighting function g of mu_g = |g|^2 mu and as a test function for
/// Toeplitz application.
class Polynomial {
public:
    explicit Polynomial(std::size_t dimension, std::map<MultiIndex, cplx> terms = {});

    static Polynomial constant(std::size_t dimension, cplx value);
    static Polynomial coordinate(std::size_t dimension, std::size_t axis);

    std::size_t dimension() const { return dimension_; }
    const std::map<MultiIndex, cplx>& terms() const { return terms_; }
    int degree() const;

    cplx operator()(const ComplexPoint& z) const;

private:
    std::size_t dimension_;
    std::map<MultiIndex, cplx> terms_;
};

using PolynomialWeight = Polynomial;

enum class DensityKind { uniform, gaussian, polynomial };

/// Catalogued densities with respect to Lebesgue measure on a polydisk.
///   uniform:    1
///   gaussian:   exp(-|z - c|^2 / (2 s^2)), c the polydisk center
///   polynomial: p(z)
struct DensitySpec {
    DensityKind kind = DensityKind::uniform;
    double scale = 1.0;
    Polynomial poly{1};

    static DensitySpec uniform() { return {}; }
    static DensitySpec gaussian(double scale);
    static DensitySpec polynomial(Polynomial p);
};

std::string to_string(DensityKind kind);

class DensityMeasure {
public:
    DensityMeasure(Polydisk domain, DensitySpec density);

    std::size_t dimension() const { return domain_.dimension(); }
    const Polydisk& domain() const { return domain_; }
    const DensitySpec& density() const { return density_; }

    /// Density value at z; z is assumed to lie in the closed polydisk.
    cplx operator()(const ComplexPoint& z) const;

    /// True when the density is real and positive on the polydisk.
    bool is_positive() const { return density_.kind != DensityKind::polynomial; }

private:
    Polydisk domain_;
    DensitySpec density_;
};

/// nu = pi_* mu for the projection dropping coordinate `axis`.
DiscreteMeasure pushforward_drop_coord(const DiscreteMeasure& m, std::size_t axis);

/// mu_g = |g|^2 mu. Atoms where g vanishes are removed.
DiscreteMeasure weight_by_g(const DiscreteMeasure& m, const Polynomial& g);

/// Frobenius norm of U^* U - I.
double unitarity_deviation(const CMatrix& u);

inline constexpr double kUnitaryTolerance = 1e-12;

/// Locations zeta -> U zeta. Throws InvalidArgument if U is not unitary.
DiscreteMeasure rotate_unitary(const DiscreteMeasure& m, const CMatrix& u);

/// Seeded d x d unitary from the QR factorization of a complex Gaussian matrix.
CMatrix random_unitary(std::size_t dimension, std::uint64_t seed);

/// g = 1 + epsilon * l with l a seeded degree-1 polynomial whose coefficients
/// have modulus <= 1.
Polynomial perturb_weight(std::uint64_t seed, double epsilon, std::size_t dimension);

}  // namespace finrank
