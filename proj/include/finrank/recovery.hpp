#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finrank/measure.hpp"
#include "finrank/moments.hpp"

namespace finrank {

struct RecoveryConfig {
    double rank_tol = kDefaultRankTolerance;
    double match_tol = 1e-5;
    double epsilon = 0.05;
    int max_retries = 8;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Largest moment mismatch accepted from a recovery.
inline constexpr double kResidualLimit = 1e-6;

/// Relative SVD threshold applied to coordinate projections (capped by rank_tol).
inline constexpr double kProjectionRankTolerance = 1e-11;

struct RecoveryReport {
    DiscreteMeasure atoms{1};
    double residual = 0.0;
    std::size_t detected_rank = 0;
    int retries_used = 0;
    std::uint64_t rotation_seed_used = 0;
    std::vector<std::string> retry_log;
};

/// One-dimensional recovery by the matrix-pencil method on the row-shifted
/// moment matrix, followed by a least-squares weight solve.
DiscreteMeasure recover_1d(const MomentMatrix& a, const RecoveryConfig& cfg = {});

/// Recovers the atoms of a finite-rank measure from its moment matrix by
/// induction on the dimension: recover the two coordinate projections,
/// intersect them on a candidate grid, keep the candidates confirmed by a
/// projection in randomly rotated coordinates, then solve for the weights.
/// Degenerate projections (weights cancelling on a fibre) are handled by
/// retrying on the moments of mu_g = |1 + eps l|^2 mu.
///
/// Throws RecoveryFailed when the retries are exhausted or the residual
/// exceeds kResidualLimit, InconsistentRank when the candidate grid cannot
/// supply as many atoms as the rank of the matrix.
RecoveryReport recover_atoms(const MomentMatrix& a, const RecoveryConfig& cfg = {});

/// max over |alpha|, |beta| <= max_degree of |sum_k lambda_k zeta_k^alpha conj(zeta_k)^beta - a_{alpha beta}|.
double moment_residual(const MomentMatrix& a, const DiscreteMeasure& m, int max_degree);

/// Polishes locations and weights by Gauss-Newton on all entries of `a`.
/// Returns the refined measure; the input is returned unchanged if no step
/// reduces the mismatch.
DiscreteMeasure refine_atoms(const MomentMatrix& a, const DiscreteMeasure& m, int max_iterations = 12);

}  // namespace finrank
