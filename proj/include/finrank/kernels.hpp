#pragma once

// Data-parallel assembly kernels. Each kernel has a serial reference and an
// OpenMP version; both visit the terms of every output entry in the same
// order, so their results agree bit for bit regardless of thread count.

#include <span>

#include "finrank/types.hpp"

namespace finrank::kernels {

enum class Exec { serial, parallel };

/// G(i, j) = sum_q w_q V(i, q) conj(V(j, q)), summed in increasing q.
/// When every w_q is real the lower triangle is mirrored from the upper one,
/// so G is exactly Hermitian.
CMatrix weighted_gram(const CMatrix& values, std::span<const cplx> weights,
                      Exec exec = Exec::parallel);

CMatrix weighted_gram_serial(const CMatrix& values, std::span<const cplx> weights);
CMatrix weighted_gram_omp(const CMatrix& values, std::span<const cplx> weights);

/// Scales rows and columns: out(i, j) = s_i a(i, j) s_j.
CMatrix diagonal_congruence(const CMatrix& a, std::span<const double> scale,
                            Exec exec = Exec::parallel);

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace finrank::kernels
