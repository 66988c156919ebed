#include "finrank/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "finrank/error.hpp"

namespace finrank::kernels {

namespace {

bool all_real(std::span<const cplx> w)
{
    return std::all_of(w.begin(), w.end(), [](const cplx& x) { return x.imag() == 0.0; });
}

void check_shapes(const CMatrix& values, std::span<const cplx> weights)
{
    if (static_cast<std::size_t>(values.cols()) != weights.size()) {
        throw InvalidArgument("weighted_gram: one weight per column required");
    }
}

// Row i of the Gram matrix; columns [first, n).
inline void gram_row(const CMatrix& v, std::span<const cplx> w, Eigen::Index i,
                     Eigen::Index first, CMatrix& out)
{
    const Eigen::Index n = v.rows();
    const Eigen::Index nq = v.cols();
    for (Eigen::Index j = first; j < n; ++j) {
        cplx s{0.0, 0.0};
        for (Eigen::Index q = 0; q < nq; ++q) {
            s += w[static_cast<std::size_t>(q)] * v(i, q) * std::conj(v(j, q));
        }
        out(i, j) = s;
    }
}

void mirror_lower(CMatrix& out)
{
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        out(i, i) = cplx{out(i, i).real(), 0.0};
        for (Eigen::Index j = 0; j < i; ++j) out(i, j) = std::conj(out(j, i));
    }
}

}  // namespace

CMatrix weighted_gram_serial(const CMatrix& values, std::span<const cplx> weights)
{
    check_shapes(values, weights);
    const Eigen::Index n = values.rows();
    CMatrix out(n, n);
    const bool hermitian = all_real(weights);
    for (Eigen::Index i = 0; i < n; ++i) gram_row(values, weights, i, hermitian ? i : 0, out);
    if (hermitian) mirror_lower(out);
    return out;
}

CMatrix weighted_gram_omp(const CMatrix& values, std::span<const cplx> weights)
{
    check_shapes(values, weights);
    const Eigen::Index n = values.rows();
    CMatrix out(n, n);
    const bool hermitian = all_real(weights);
#pragma omp parallel for schedule(dynamic, 4)
    for (Eigen::Index i = 0; i < n; ++i) gram_row(values, weights, i, hermitian ? i : 0, out);
    if (hermitian) mirror_lower(out);
    return out;
}

CMatrix weighted_gram(const CMatrix& values, std::span<const cplx> weights, Exec exec)
{
    return exec == Exec::serial ? weighted_gram_serial(values, weights)
                                : weighted_gram_omp(values, weights);
}

CMatrix diagonal_congruence(const CMatrix& a, std::span<const double> scale, Exec exec)
{
    if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != scale.size()) {
        throw InvalidArgument("diagonal_congruence: shape mismatch");
    }
    const Eigen::Index n = a.rows();
    CMatrix out(n, n);
    auto row = [&](Eigen::Index i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = a(i, j) * (scale[static_cast<std::size_t>(i)] * scale[static_cast<std::size_t>(j)]);
        }
    };
    if (exec == Exec::serial) {
        for (Eigen::Index i = 0; i < n; ++i) row(i);
    } else {
#pragma omp parallel for
        for (Eigen::Index i = 0; i < n; ++i) row(i);
    }
    return out;
}

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace finrank::kernels
