#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "finrank/kernels.hpp"
#include "finrank/measure.hpp"
#include "finrank/multi_index.hpp"
#include "finrank/types.hpp"

namespace finrank {

/// Truncated moment matrix a_{alpha beta} = int z^alpha conj(z)^beta dmu over
/// all |alpha|, |beta| <= D in graded lexicographic order.
struct MomentMatrix {
    IndexBasis basis;
    CMatrix entries;

    std::size_t dimension() const { return basis.dimension(); }
    int max_degree() const { return basis.max_degree(); }
    std::size_t size() const { return basis.size(); }

    const cplx& operator()(std::size_t i, std::size_t j) const
    {
        return entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    cplx at(const MultiIndex& alpha, const MultiIndex& beta) const;
};

inline constexpr double kDefaultRankTolerance = 1e-8;
inline constexpr double kIllConditionedRatio = 1e12;

cplx moment_entry(const DiscreteMeasure& m, const MultiIndex& alpha, const MultiIndex& beta);

/// V(i, k) = z_k^{alpha_i}, built along the basis by one multiplication per entry.
CMatrix monomial_table(const IndexBasis& basis, std::span<const ComplexPoint> points,
                       kernels::Exec exec = kernels::Exec::parallel);

MomentMatrix moment_matrix(const DiscreteMeasure& m, int max_degree,
                           kernels::Exec exec = kernels::Exec::parallel);

struct QuadratureOptions {
    double tolerance = 1e-10;
    int max_refinements = 6;
};

struct DensityMoments {
    MomentMatrix matrix;
    double error_estimate = 0.0;
    int radial_nodes = 0;
    int angular_nodes = 0;
};

/// Moments of a density on a polydisk by the per-coordinate polar product
/// rule, refined by doubling until two successive levels agree to the
/// requested tolerance. Throws NumericalError on non-convergence.
DensityMoments density_moments(const DensityMeasure& m, int max_degree,
                               const QuadratureOptions& options = {});

MomentMatrix moment_matrix(const DensityMeasure& m, int max_degree,
                           const QuadratureOptions& options = {});

/// Same integral evaluated on the full tensor-product node grid of a fixed
/// rule (no factorization). Used to cross-check and benchmark.
MomentMatrix moment_matrix_tensor(const DensityMeasure& m, int max_degree, int radial_nodes,
                                  int angular_nodes,
                                  kernels::Exec exec = kernels::Exec::parallel);

/// Rows and columns with alpha_axis = beta_axis = 0, reindexed over C^{d-1}.
MomentMatrix submatrix_drop_axis(const MomentMatrix& a, std::size_t axis);
MomentMatrix submatrix_drop_first(const MomentMatrix& a);

/// Leading principal block of degree <= max_degree.
MomentMatrix truncate(const MomentMatrix& a, int max_degree);

struct RankResult {
    std::size_t rank = 0;
    std::vector<double> singular_values;  // descending
    bool ill_conditioned = false;          // sigma_max / sigma_rank > 1e12
};

RankResult numerical_rank(const CMatrix& a, double rel_tol = kDefaultRankTolerance);
RankResult numerical_rank(const MomentMatrix& a, double rel_tol = kDefaultRankTolerance);

/// Moments of mu_g = |g|^2 mu from those of mu:
///   a_{a'b'}(mu_g) = sum c_gamma conj(c_delta) a_{a'+gamma, b'+delta}(mu).
/// The result has degree D - deg g.
MomentMatrix reweight_moments(const MomentMatrix& a, const Polynomial& g);

/// R(i, j) = coefficient of z^{alpha_j} in (Uz)^{alpha_i}; block diagonal in degree.
CMatrix rotation_operator(const IndexBasis& basis, const CMatrix& u);

/// Moments of the rotated measure z -> Uz: R A R^*.
MomentMatrix rotate_moments(const MomentMatrix& a, const CMatrix& u);

}  // namespace finrank
