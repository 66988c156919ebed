#include "finrank/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "finrank/error.hpp"

namespace finrank {

std::string to_string(KernelKind kind)
{
    return kind == KernelKind::bargmann ? "bargmann" : "bergman";
}

KernelSpec::KernelSpec(KernelKind kind, std::optional<Polydisk> domain)
    : kind_(kind), domain_(std::move(domain))
{
    if (kind_ == KernelKind::bargmann && domain_) throw InvalidArgument("the Bargmann kernel takes no domain");
    if (kind_ == KernelKind::bergman_polydisk && !domain_) throw InvalidArgument("the Bergman kernel needs a polydisk");
}

namespace {

void require_inside(const Polydisk& dom, const ComplexPoint& z)
{
    if (z.dimension() != dom.dimension()) throw InvalidArgument("point dimension does not match the polydisk");
    if (!dom.contains(z)) throw DomainError("point lies outside the open polydisk");
}

}  // namespace

cplx kernel_eval(const KernelSpec& k, const ComplexPoint& z, const ComplexPoint& w)
{
    if (z.dimension() != w.dimension()) throw InvalidArgument("kernel arguments differ in dimension");
    if (k.kind() == KernelKind::bargmann) {
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < z.dimension(); ++j) s += z[j] * std::conj(w[j]);
        return std::exp(0.5 * s);
    }
    const auto& dom = *k.domain();
    require_inside(dom, z);
    require_inside(dom, w);
    cplx prod{1.0, 0.0};
    for (std::size_t j = 0; j < z.dimension(); ++j) {
        const double r2 = dom.radii()[j] * dom.radii()[j];
        const cplx denom = r2 - (z[j] - dom.center()[j]) * std::conj(w[j] - dom.center()[j]);
        prod *= r2 / (std::numbers::pi * denom * denom);
    }
    return prod;
}

cplx toeplitz_apply(const KernelSpec& k, const DiscreteMeasure& m, const Polynomial& u,
                    const ComplexPoint& z)
{
    if (u.dimension() != m.dimension() || z.dimension() != m.dimension()) {
        throw InvalidArgument("dimension mismatch in Toeplitz application");
    }
    cplx s{0.0, 0.0};
    for (const auto& a : m.atoms()) s += kernel_eval(k, z, a.location) * a.weight * u(a.location);
    return s;
}

std::vector<double> basis_normalization(const KernelSpec& k, const IndexBasis& basis)
{
    std::vector<double> s(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& alpha = basis[i];
        double v = 1.0;
        if (k.kind() == KernelKind::bargmann) {
            if (alpha.degree() > kMaxBargmannDegree) {
                throw InvalidArgument("Bargmann normalization is limited to degree 40");
            }
            double norm2 = 1.0;  // 2^|alpha| alpha!
            for (std::size_t j = 0; j < alpha.dimension(); ++j) {
                for (int p = 1; p <= alpha[j]; ++p) norm2 *= 2.0 * p;
            }
            v = 1.0 / std::sqrt(norm2);
        } else {
            const auto& radii = k.domain()->radii();
            for (std::size_t j = 0; j < alpha.dimension(); ++j) {
                v *= std::sqrt((alpha[j] + 1) / std::numbers::pi) / std::pow(radii[j], alpha[j] + 1);
            }
        }
        s[i] = v;
    }
    return s;
}

GalerkinMatrix galerkin_matrix(const KernelSpec& k, const DiscreteMeasure& m, int max_degree,
                               kernels::Exec exec)
{
    IndexBasis basis(m.dimension(), max_degree);
    std::vector<ComplexPoint> points;
    std::vector<cplx> weights;
    for (const auto& a : m.atoms()) {
        if (k.kind() == KernelKind::bergman_polydisk) {
            const auto& dom = *k.domain();
            require_inside(dom, a.location);
            std::vector<cplx> shifted(a.location.coords());
            for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] -= dom.center()[j];
            points.emplace_back(std::move(shifted));
        } else {
            points.push_back(a.location);
        }
        weights.push_back(a.weight);
    }
    CMatrix v = monomial_table(basis, points, exec);
    const auto scale = basis_normalization(k, basis);
    for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) *= scale[static_cast<std::size_t>(i)];
    CMatrix entries = kernels::weighted_gram(v, weights, exec);
    return {k, std::move(basis), std::move(entries)};
}

GalerkinMatrix galerkin_from_moments(const KernelSpec& k, const MomentMatrix& a, kernels::Exec exec)
{
    const auto scale = basis_normalization(k, a.basis);
    return {k, a.basis, kernels::diagonal_congruence(a.entries, scale, exec)};
}

std::vector<cplx> spectrum(const CMatrix& a)
{
    if (a.rows() != a.cols()) throw InvalidArgument("spectrum of a non-square matrix");
    std::vector<cplx> ev;
    if (a.size() == 0) return ev;
    if (!a.allFinite()) throw NumericalError("eigen-solver failed: non-finite entries");
    Eigen::ComplexEigenSolver<CMatrix> es(a, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigen-solver failed to converge");
    const auto& v = es.eigenvalues();
    ev.assign(v.data(), v.data() + v.size());
    std::stable_sort(ev.begin(), ev.end(), [](const cplx& x, const cplx& y) {
        const double ax = std::abs(x);
        const double ay = std::abs(y);
        if (ax != ay) return ax > ay;
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return ev;
}

std::vector<cplx> spectrum(const GalerkinMatrix& g)
{
    return spectrum(g.entries);
}

}  // namespace finrank
