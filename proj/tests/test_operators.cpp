#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "finrank/error.hpp"
#include "finrank/generate.hpp"
#include "finrank/moments.hpp"
#include "finrank/operators.hpp"
#include "finrank/quadrature.hpp"
#include "finrank/verify.hpp"

using namespace finrank;
using namespace std::complex_literals;
using std::numbers::pi;

namespace {

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

std::size_t count_above(const std::vector<cplx>& ev, double rel)
{
    if (ev.empty()) return 0;
    const double top = std::abs(ev.front());
    std::size_t n = 0;
    for (const auto& e : ev) n += std::abs(e) > rel * top;
    return n;
}

}  // namespace

TEST_CASE("kernel specs")
{
    CHECK_THROWS_AS(KernelSpec(KernelKind::bargmann, Polydisk::unit(1)), InvalidArgument);
    CHECK_THROWS_AS(KernelSpec(KernelKind::bergman_polydisk, std::nullopt), InvalidArgument);
    CHECK(to_string(KernelSpec::bargmann().kind()) == "bargmann");
    CHECK(to_string(KernelSpec::bergman(Polydisk::unit(2)).kind()) == "bergman");
}

TEST_CASE("kernel values")
{
    const auto barg = KernelSpec::bargmann();
    CHECK(kernel_eval(barg, ComplexPoint{0.0, 0.0}, ComplexPoint{3.0 - 1.0i, 0.2i}) == 1.0);
    CHECK(kernel_eval(barg, ComplexPoint{2.0}, ComplexPoint{2.0}).real() == doctest::Approx(7.389056).epsilon(1e-7));
    CHECK(std::abs(kernel_eval(barg, ComplexPoint{1.0i}, ComplexPoint{1.0}) - std::exp(0.5i)) <= 1e-15);

    for (std::size_t d = 1; d <= 3; ++d) {
        const auto berg = KernelSpec::bergman(Polydisk::unit(d));
        const ComplexPoint c(std::vector<cplx>(d, 0.0));
        CHECK(kernel_eval(berg, c, c).real() == doctest::Approx(std::pow(pi, -static_cast<double>(d))));
    }
    const auto shifted = KernelSpec::bergman(Polydisk(ComplexPoint{1.0 + 1.0i}, {2.0}));
    CHECK(kernel_eval(shifted, ComplexPoint{1.0 + 1.0i}, ComplexPoint{1.0 + 1.0i}).real() ==
          doctest::Approx(1.0 / (4.0 * pi)));
    // one-variable closed form 1 / (pi (1 - z conj w)^2)
    CHECK(std::abs(kernel_eval(KernelSpec::bergman(Polydisk::unit(1)), ComplexPoint{0.5}, ComplexPoint{0.5i}) -
                   1.0 / (pi * (1.0 + 0.25i) * (1.0 + 0.25i))) <= 1e-15);
    CHECK_THROWS_AS(kernel_eval(KernelSpec::bergman(Polydisk::unit(1)), ComplexPoint{1.0}, ComplexPoint{0.0}),
                    DomainError);
}

TEST_CASE("Toeplitz application")
{
    const auto barg = KernelSpec::bargmann();
    const Polynomial one = Polynomial::constant(1, 1.0);
    CHECK(toeplitz_apply(barg, DiscreteMeasure(1), one, ComplexPoint{0.3}) == 0.0);

    const ComplexPoint zeta{0.4 - 0.8i};
    const cplx lambda = 2.0 + 1.0i;
    DiscreteMeasure m(1, {{zeta, lambda}});
    const ComplexPoint z{1.0 + 0.5i};
    CHECK(std::abs(toeplitz_apply(barg, m, one, z) - lambda * std::exp(z[0] * std::conj(zeta[0]) / 2.0)) <= 1e-14);

    // single atom: every image is a multiple of K(., zeta)
    DiscreteMeasure m2(2, {{{0.3, -0.2i}, 1.5}});
    for (const auto& k : {barg, KernelSpec::bergman(Polydisk::unit(2))}) {
        const Polynomial u1 = Polynomial::coordinate(2, 0);
        const Polynomial u2(2, {{MultiIndex({0, 2}), 1.0i}, {MultiIndex({0, 0}), 0.5}});
        std::vector<cplx> r1, r2;
        for (int s = 0; s < 10; ++s) {
            const ComplexPoint p{0.08 * s * std::polar(1.0, 0.7 * s), 0.05 * s * std::polar(1.0, -1.3 * s)};
            r1.push_back(toeplitz_apply(k, m2, u1, p));
            r2.push_back(toeplitz_apply(k, m2, u2, p));
        }
        const cplx ratio = r2[0] / r1[0];
        for (int s = 0; s < 10; ++s) CHECK(std::abs(r2[s] - ratio * r1[s]) <= 1e-13 * std::abs(r2[s]));
    }
}

TEST_CASE("Bargmann normalization matches Gaussian norms of monomials")
{
    // ||z^j||^2 = int_0^inf r^{2j+1} e^{-r^2/2} dr
    const auto rule = gauss_legendre(80, 0.0, 24.0);
    const auto s = basis_normalization(KernelSpec::bargmann(), IndexBasis(1, 8));
    for (int j = 0; j <= 8; ++j) {
        double norm2 = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double r = rule.nodes[q];
            norm2 += rule.weights[q] * std::pow(r, 2 * j + 1) * std::exp(-r * r / 2.0);
        }
        CHECK(s[j] * s[j] * norm2 == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(basis_normalization(KernelSpec::bargmann(), IndexBasis(1, 41)), InvalidArgument);
}

TEST_CASE("Bergman normalization: uniform density gives the identity")
{
    const Polydisk dom(ComplexPoint{0.0, 0.0}, {1.0, 1.7});
    DensityMeasure area(dom, DensitySpec::uniform());
    const auto g = galerkin_from_moments(KernelSpec::bergman(dom), moment_matrix(area, 4));
    CHECK(max_abs(g.entries - CMatrix::Identity(g.entries.rows(), g.entries.cols())) <= 1e-10);
}

TEST_CASE("Galerkin matrices")
{
    const auto barg = KernelSpec::bargmann();
    const auto g0 = galerkin_matrix(barg, DiscreteMeasure(2, {{{0.0, 0.0}, 1.0}}), 3);
    CHECK(g0.entries(0, 0) == 1.0);
    CHECK(g0.entries.cwiseAbs().sum() == 1.0);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t d = 1 + seed % 3;
        const auto m = random_measure({.dimension = d, .count = 4, .seed = 400 + seed});
        const auto a = moment_matrix(m, 4);
        const auto rank = numerical_rank(a).rank;
        for (const auto& k : {barg, KernelSpec::bergman(enclosing_polydisk(m))}) {
            const auto direct = galerkin_matrix(k, m, 4);
            const auto cong = galerkin_from_moments(k, a);
            CHECK(max_abs(direct.entries - cong.entries) <= 1e-12 * std::max(1.0, max_abs(cong.entries)));
            CHECK(numerical_rank(direct.entries).rank == rank);
        }
    }
}

TEST_CASE("Galerkin matrices are Hermitian for real weights")
{
    DiscreteMeasure m(2, {{{0.5, -0.3i}, 1.0}, {{-0.2 + 0.1i, 0.4}, -2.0}, {{0.1, 0.1}, 0.7}});
    for (const auto& k : {KernelSpec::bargmann(), KernelSpec::bergman(Polydisk::unit(2))}) {
        const auto g = galerkin_matrix(k, m, 5);
        CHECK(max_abs(g.entries - g.entries.adjoint()) <= 1e-14);
    }
}

TEST_CASE("Bergman Galerkin of a shifted polydisk")
{
    const Polydisk dom(ComplexPoint{1.0 + 1.0i}, {2.0});
    DiscreteMeasure m(1, {{{1.5 + 0.5i}, 2.0}});
    const auto g = galerkin_matrix(KernelSpec::bergman(dom), m, 3);
    const auto s = basis_normalization(KernelSpec::bergman(dom), g.basis);
    const cplx w = 0.5 - 0.5i;
    for (int j = 0; j <= 3; ++j)
        for (int k = 0; k <= 3; ++k)
            CHECK(std::abs(g.entries(j, k) - 2.0 * s[j] * s[k] * std::pow(w, j) * std::pow(std::conj(w), k)) <= 1e-14);
    CHECK(s[1] == doctest::Approx(std::sqrt(2.0 / pi) / 4.0));
}

TEST_CASE("spectra")
{
    const auto zero = spectrum(CMatrix::Zero(4, 4));
    CHECK(zero.size() == 4);
    for (const auto& e : zero) CHECK(e == 0.0);

    const auto g = galerkin_matrix(KernelSpec::bargmann(), DiscreteMeasure(1, {{{0.0}, 2.0}}), 4);
    const auto ev = spectrum(g);
    CHECK(std::abs(ev[0] - 2.0) <= 1e-15);
    for (std::size_t i = 1; i < ev.size(); ++i) CHECK(std::abs(ev[i]) <= 1e-15);

    const auto m = random_measure({.dimension = 1, .count = 3, .seed = 77, .separation = 0.3});
    const auto ev3 = spectrum(galerkin_matrix(KernelSpec::bargmann(), m, 6));
    CHECK(count_above(ev3, 1e-8) == 3);
    for (std::size_t i = 1; i < ev3.size(); ++i) CHECK(std::abs(ev3[i - 1]) >= std::abs(ev3[i]));
}
