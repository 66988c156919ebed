#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finrank/measure.hpp"
#include "finrank/moments.hpp"

namespace finrank {

enum class KernelKind { bargmann, bergman_polydisk };

std::string to_string(KernelKind kind);

/// Reproducing kernel of the Bargmann space (no domain) or of the Bergman
/// space of a polydisk.
class KernelSpec {
public:
    static KernelSpec bargmann() { return KernelSpec(KernelKind::bargmann, std::nullopt); }
    static KernelSpec bergman(Polydisk domain) { return KernelSpec(KernelKind::bergman_polydisk, std::move(domain)); }
    KernelSpec(KernelKind kind, std::optional<Polydisk> domain);

    KernelKind kind() const { return kind_; }
    const std::optional<Polydisk>& domain() const { return domain_; }

private:
    KernelKind kind_;
    std::optional<Polydisk> domain_;
};

/// Bargmann: exp(sum_j z_j conj(w_j) / 2).
/// Bergman polydisk: prod_j r_j^2 / (pi (r_j^2 - (z_j - c_j) conj(w_j - c_j))^2).
cplx kernel_eval(const KernelSpec& k, const ComplexPoint& z, const ComplexPoint& w);

/// (T_mu u)(z) = sum_k K(z, zeta_k) lambda_k u(zeta_k).
cplx toeplitz_apply(const KernelSpec& k, const DiscreteMeasure& m, const Polynomial& u,
                    const ComplexPoint& z);

inline constexpr int kMaxBargmannDegree = 40;

/// Positive scale s_alpha with e_alpha = s_alpha (z - c)^alpha orthonormal in
/// the kernel's space (c = 0 for Bargmann).
///   Bargmann: 1 / sqrt(2^|alpha| alpha!)
///   Bergman:  prod_j sqrt((alpha_j + 1) / pi) / r_j^(alpha_j + 1)
std::vector<double> basis_normalization(const KernelSpec& k, const IndexBasis& basis);

struct GalerkinMatrix {
    KernelSpec kernel;
    IndexBasis basis;
    CMatrix entries;  // (T e_alpha, e_beta)
};

/// Entry (alpha, beta) = sum_k lambda_k e_alpha(zeta_k) conj(e_beta(zeta_k)).
GalerkinMatrix galerkin_matrix(const KernelSpec& k, const DiscreteMeasure& m, int max_degree,
                               kernels::Exec exec = kernels::Exec::parallel);

/// Same matrix by diagonal congruence of a moment matrix. For the Bergman
/// kernel the moments must be taken in coordinates centered at the polydisk
/// center.
GalerkinMatrix galerkin_from_moments(const KernelSpec& k, const MomentMatrix& a,
                                     kernels::Exec exec = kernels::Exec::parallel);

/// Eigenvalues sorted by descending modulus.
std::vector<cplx> spectrum(const CMatrix& a);
std::vector<cplx> spectrum(const GalerkinMatrix& g);

}  // namespace finrank
