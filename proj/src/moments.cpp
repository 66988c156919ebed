#include "finrank/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finrank/error.hpp"
#include "finrank/quadrature.hpp"

namespace finrank {

cplx MomentMatrix::at(const MultiIndex& alpha, const MultiIndex& beta) const
{
    return (*this)(basis.index_of(alpha), basis.index_of(beta));
}

cplx moment_entry(const DiscreteMeasure& m, const MultiIndex& alpha, const MultiIndex& beta)
{
    if (alpha.dimension() != m.dimension() || beta.dimension() != m.dimension()) {
        throw InvalidArgument("multi-index dimension does not match the measure");
    }
    cplx s{0.0, 0.0};
    for (const auto& a : m.atoms()) {
        s += a.weight * monomial(a.location, alpha) * std::conj(monomial(a.location, beta));
    }
    return s;
}

CMatrix monomial_table(const IndexBasis& basis, std::span<const ComplexPoint> points,
                       kernels::Exec exec)
{
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto np = static_cast<Eigen::Index>(points.size());
    for (const auto& p : points) {
        if (p.dimension() != basis.dimension()) throw InvalidArgument("point dimension does not match the basis");
    }
    CMatrix v(n, np);
    auto column = [&](Eigen::Index k) {
        const auto& z = points[static_cast<std::size_t>(k)];
        v(0, k) = cplx{1.0, 0.0};
        for (Eigen::Index i = 1; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            v(i, k) = v(static_cast<Eigen::Index>(basis.parent(ui)), k) * z[basis.step_axis(ui)];
        }
    };
    if (exec == kernels::Exec::serial) {
        for (Eigen::Index k = 0; k < np; ++k) column(k);
    } else {
#pragma omp parallel for
        for (Eigen::Index k = 0; k < np; ++k) column(k);
    }
    return v;
}

MomentMatrix moment_matrix(const DiscreteMeasure& m, int max_degree, kernels::Exec exec)
{
    IndexBasis basis(m.dimension(), max_degree);
    std::vector<ComplexPoint> locations;
    std::vector<cplx> weights;
    for (const auto& a : m.atoms()) {
        locations.push_back(a.location);
        weights.push_back(a.weight);
    }
    CMatrix v = monomial_table(basis, locations, exec);
    CMatrix entries = kernels::weighted_gram(v, weights, exec);
    return {std::move(basis), std::move(entries)};
}

namespace {

// One-coordinate table t(a, b) = int (z)^a conj(z)^b f(z) dm over a disc, for
// a < rows, b < cols, where f is the per-coordinate factor of the density.
Eigen::MatrixXcd disc_table(const DiscRule& rule, const std::vector<double>& factor, int rows,
                            int cols)
{
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(rows, cols);
    std::vector<cplx> zp(static_cast<std::size_t>(rows));
    std::vector<cplx> zbp(static_cast<std::size_t>(cols));
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const cplx z = rule.nodes[q];
        const double w = rule.weights[q] * factor[q];
        zp[0] = cplx{1.0, 0.0};
        for (int a = 1; a < rows; ++a) zp[static_cast<std::size_t>(a)] = zp[static_cast<std::size_t>(a - 1)] * z;
        zbp[0] = cplx{1.0, 0.0};
        for (int b = 1; b < cols; ++b) zbp[static_cast<std::size_t>(b)] = zbp[static_cast<std::size_t>(b - 1)] * std::conj(z);
        for (int a = 0; a < rows; ++a) {
            for (int b = 0; b < cols; ++b) {
                t(a, b) += w * zp[static_cast<std::size_t>(a)] * zbp[static_cast<std::size_t>(b)];
            }
        }
    }
    return t;
}

struct FactorTables {
    std::vector<Eigen::MatrixXcd> tables;  // one per coordinate
};

FactorTables factor_tables(const DensityMeasure& m, int rows, int cols, int radial, int angular)
{
    FactorTables out;
    const auto& dom = m.domain();
    for (std::size_t j = 0; j < m.dimension(); ++j) {
        const DiscRule rule = disc_rule(dom.center()[j], dom.radii()[j], radial, angular);
        std::vector<double> factor(rule.nodes.size(), 1.0);
        if (m.density().kind == DensityKind::gaussian) {
            const double s2 = 2.0 * m.density().scale * m.density().scale;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                factor[q] = std::exp(-std::norm(rule.nodes[q] - dom.center()[j]) / s2);
            }
        }
        out.tables.push_back(disc_table(rule, factor, rows, cols));
    }
    return out;
}

CMatrix assemble_from_tables(const IndexBasis& basis, const FactorTables& ft,
                             const DensityMeasure& m)
{
    const auto n = static_cast<Eigen::Index>(basis.size());
    const std::size_t d = basis.dimension();
    std::vector<std::pair<MultiIndex, cplx>> terms;
    if (m.density().kind == DensityKind::polynomial) {
        for (const auto& t : m.density().poly.terms()) terms.push_back(t);
    } else {
        terms.emplace_back(MultiIndex::zero(d), cplx{1.0, 0.0});
    }
    const bool hermitian = m.is_positive();
    CMatrix a = CMatrix::Zero(n, n);
#pragma omp parallel for
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& alpha = basis[static_cast<std::size_t>(i)];
        for (Eigen::Index j = hermitian ? i : 0; j < n; ++j) {
            const auto& beta = basis[static_cast<std::size_t>(j)];
            cplx s{0.0, 0.0};
            for (const auto& [gamma, c] : terms) {
                cplx prod = c;
                for (std::size_t k = 0; k < d; ++k) prod *= ft.tables[k](alpha[k] + gamma[k], beta[k]);
                s += prod;
            }
            a(i, j) = s;
        }
    }
    if (hermitian) {
        for (Eigen::Index i = 0; i < n; ++i) {
            a(i, i) = cplx{a(i, i).real(), 0.0};
            for (Eigen::Index j = 0; j < i; ++j) a(i, j) = std::conj(a(j, i));
        }
    }
    return a;
}

}  // namespace

DensityMoments density_moments(const DensityMeasure& m, int max_degree,
                               const QuadratureOptions& options)
{
    if (max_degree < 0) throw InvalidArgument("max degree must be nonnegative");
    const int pdeg = m.density().kind == DensityKind::polynomial ? m.density().poly.degree() : 0;
    const int rows = max_degree + pdeg + 1;
    const int cols = max_degree + 1;
    int radial = max_degree + pdeg + 1;
    int angular = 4 * (max_degree + pdeg + 1);

    FactorTables prev = factor_tables(m, rows, cols, radial, angular);
    for (int level = 0; level < options.max_refinements; ++level) {
        FactorTables next = factor_tables(m, rows, cols, 2 * radial, 2 * angular);
        double diff = 0.0;
        double scale = 1.0;
        cplx worst_prev{}, worst_next{};
        for (std::size_t k = 0; k < next.tables.size(); ++k) {
            for (Eigen::Index a = 0; a < rows; ++a) {
                for (Eigen::Index b = 0; b < cols; ++b) {
                    const double dv = std::abs(next.tables[k](a, b) - prev.tables[k](a, b));
                    scale = std::max(scale, std::abs(next.tables[k](a, b)));
                    if (dv > diff) {
                        diff = dv;
                        worst_prev = prev.tables[k](a, b);
                        worst_next = next.tables[k](a, b);
                    }
                }
            }
        }
        radial *= 2;
        angular *= 2;
        if (diff <= options.tolerance * scale) {
            IndexBasis basis(m.dimension(), max_degree);
            CMatrix entries = assemble_from_tables(basis, next, m);
            return {{std::move(basis), std::move(entries)}, diff, radial, angular};
        }
        if (level + 1 == options.max_refinements) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "quadrature did not converge: last two refinements gave " << worst_prev << " and "
                << worst_next;
            throw NumericalError(msg.str());
        }
        prev = std::move(next);
    }
    throw NumericalError("quadrature did not converge: no refinement performed");
}

MomentMatrix moment_matrix(const DensityMeasure& m, int max_degree, const QuadratureOptions& options)
{
    return density_moments(m, max_degree, options).matrix;
}

MomentMatrix moment_matrix_tensor(const DensityMeasure& m, int max_degree, int radial_nodes,
                                  int angular_nodes, kernels::Exec exec)
{
    IndexBasis basis(m.dimension(), max_degree);
    const auto& dom = m.domain();
    std::vector<ComplexPoint> nodes;
    // Cartesian product of per-coordinate disc rules.
    std::vector<std::vector<cplx>> partial{{}};
    std::vector<double> partial_w{1.0};
    for (std::size_t j = 0; j < m.dimension(); ++j) {
        const DiscRule rule = disc_rule(dom.center()[j], dom.radii()[j], radial_nodes, angular_nodes);
        std::vector<std::vector<cplx>> grown;
        std::vector<double> grown_w;
        grown.reserve(partial.size() * rule.nodes.size());
        for (std::size_t p = 0; p < partial.size(); ++p) {
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                auto coords = partial[p];
                coords.push_back(rule.nodes[q]);
                grown.push_back(std::move(coords));
                grown_w.push_back(partial_w[p] * rule.weights[q]);
            }
        }
        partial = std::move(grown);
        partial_w = std::move(grown_w);
    }
    std::vector<cplx> w(partial.size());
    nodes.reserve(partial.size());
    for (std::size_t q = 0; q < partial.size(); ++q) {
        nodes.emplace_back(std::move(partial[q]));
        w[q] = partial_w[q] * m(nodes.back());
    }
    CMatrix v = monomial_table(basis, nodes, exec);
    CMatrix entries = kernels::weighted_gram(v, w, exec);
    return {std::move(basis), std::move(entries)};
}

MomentMatrix submatrix_drop_axis(const MomentMatrix& a, std::size_t axis)
{
    if (a.dimension() < 2) throw InvalidArgument("cannot project below dimension 1");
    if (axis >= a.dimension()) throw InvalidArgument("projection axis out of range");
    IndexBasis sub(a.dimension() - 1, a.max_degree());
    std::vector<Eigen::Index> map(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) {
        map[i] = static_cast<Eigen::Index>(a.basis.index_of(sub[i].insert(axis, 0)));
    }
    const auto n = static_cast<Eigen::Index>(sub.size());
    CMatrix e(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            e(i, j) = a.entries(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
        }
    }
    return {std::move(sub), std::move(e)};
}

MomentMatrix submatrix_drop_first(const MomentMatrix& a)
{
    return submatrix_drop_axis(a, 0);
}

MomentMatrix truncate(const MomentMatrix& a, int max_degree)
{
    if (max_degree < 0 || max_degree > a.max_degree()) {
        throw InvalidArgument("truncation degree out of range");
    }
    IndexBasis basis(a.dimension(), max_degree);
    const auto n = static_cast<Eigen::Index>(basis.size());
    CMatrix e = a.entries.topLeftCorner(n, n);
    return {std::move(basis), std::move(e)};
}

RankResult numerical_rank(const CMatrix& a, double rel_tol)
{
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("rank tolerance must lie in (0, 1)");
    RankResult r;
    if (a.size() == 0) return r;
    if (!a.allFinite()) throw NumericalError("SVD failed: matrix has non-finite entries");
    Eigen::BDCSVD<CMatrix> svd(a);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
    const auto& s = svd.singularValues();
    r.singular_values.assign(s.data(), s.data() + s.size());
    std::sort(r.singular_values.begin(), r.singular_values.end(), std::greater<>());
    const double smax = r.singular_values.front();
    if (smax == 0.0) return r;
    for (double v : r.singular_values) {
        if (v > rel_tol * smax) ++r.rank;
    }
    r.ill_conditioned = smax > kIllConditionedRatio * r.singular_values[r.rank - 1];
    return r;
}

RankResult numerical_rank(const MomentMatrix& a, double rel_tol)
{
    return numerical_rank(a.entries, rel_tol);
}

MomentMatrix reweight_moments(const MomentMatrix& a, const Polynomial& g)
{
    if (g.dimension() != a.dimension()) throw InvalidArgument("weight dimension does not match the moments");
    const int out_degree = a.max_degree() - g.degree();
    if (out_degree < 0) throw InvalidArgument("not enough degree headroom to reweight the moments");
    IndexBasis basis(a.dimension(), out_degree);
    const auto n = basis.size();

    std::vector<cplx> coef;
    std::vector<std::vector<Eigen::Index>> shifted;  // shifted[t][i] = index of alpha_i + gamma_t
    for (const auto& [gamma, c] : g.terms()) {
        coef.push_back(c);
        std::vector<Eigen::Index> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<Eigen::Index>(a.basis.index_of(basis[i] + gamma));
        shifted.push_back(std::move(idx));
    }
    const auto nn = static_cast<Eigen::Index>(n);
    CMatrix e = CMatrix::Zero(nn, nn);
#pragma omp parallel for
    for (Eigen::Index i = 0; i < nn; ++i) {
        for (Eigen::Index j = 0; j < nn; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t t = 0; t < coef.size(); ++t) {
                for (std::size_t u = 0; u < coef.size(); ++u) {
                    s += coef[t] * std::conj(coef[u]) *
                         a.entries(shifted[t][static_cast<std::size_t>(i)], shifted[u][static_cast<std::size_t>(j)]);
                }
            }
            e(i, j) = s;
        }
    }
    return {std::move(basis), std::move(e)};
}

CMatrix rotation_operator(const IndexBasis& basis, const CMatrix& u)
{
    const auto d = basis.dimension();
    if (u.rows() != static_cast<Eigen::Index>(d) || u.cols() != u.rows()) {
        throw InvalidArgument("rotation matrix dimension does not match the basis");
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    // successor[i][j] = index of alpha_i + e_j, for alpha_i below the top degree.
    const std::size_t below_top = basis.prefix_size(basis.max_degree() - 1);
    std::vector<std::vector<Eigen::Index>> successor(below_top, std::vector<Eigen::Index>(d));
    for (std::size_t i = 0; i < below_top; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            successor[i][j] = static_cast<Eigen::Index>(basis.index_of(basis[i] + MultiIndex::unit(d, j)));
        }
    }
    CMatrix r = CMatrix::Zero(n, n);
    r(0, 0) = cplx{1.0, 0.0};
    for (Eigen::Index i = 1; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const auto p = basis.parent(ui);
        const auto axis = static_cast<Eigen::Index>(basis.step_axis(ui));
        const int deg = basis[p].degree();
        const auto lo = static_cast<Eigen::Index>(basis.prefix_size(deg - 1));
        const auto hi = static_cast<Eigen::Index>(basis.prefix_size(deg));
        // (Uz)^{alpha_i} = (Uz)^{alpha_p} * sum_j U(axis, j) z_j
        for (Eigen::Index g = lo; g < hi; ++g) {
            const cplx c = r(static_cast<Eigen::Index>(p), g);
            if (c == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < d; ++j) {
                r(i, successor[static_cast<std::size_t>(g)][j]) += c * u(axis, static_cast<Eigen::Index>(j));
            }
        }
    }
    return r;
}

MomentMatrix rotate_moments(const MomentMatrix& a, const CMatrix& u)
{
    const CMatrix r = rotation_operator(a.basis, u);
    CMatrix e = r * a.entries * r.adjoint();
    return {a.basis, std::move(e)};
}

}  // namespace finrank
