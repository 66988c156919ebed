#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finrank/error.hpp"
#include "finrank/generate.hpp"
#include "finrank/io.hpp"
#include "finrank/moments.hpp"
#include "finrank/recovery.hpp"
#include "finrank/verify.hpp"

using namespace finrank;
using namespace std::complex_literals;

namespace {

void check_match(const DiscreteMeasure& truth, const DiscreteMeasure& got, double tol)
{
    const auto c = compare_measures(truth, got);
    CHECK(c.same_count);
    CHECK(c.bijective);
    CHECK(c.max_location_error <= tol);
    CHECK(c.max_weight_error <= tol);
}

}  // namespace

TEST_CASE("config validation")
{
    RecoveryConfig c;
    CHECK_NOTHROW(c.validate());
    c.rank_tol = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.match_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.max_retries = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("one-dimensional pencil recovery")
{
    CHECK(recover_1d(moment_matrix(DiscreteMeasure(1), 3)).empty());

    const DiscreteMeasure one(1, {{{0.5 + 0.5i}, 2.0}});
    const auto got = recover_1d(moment_matrix(one, 3));
    REQUIRE(got.size() == 1);
    CHECK(std::abs(got[0].location[0] - (0.5 + 0.5i)) <= 1e-8);
    CHECK(std::abs(got[0].weight - 2.0) <= 1e-8);

    const DiscreteMeasure pm(1, {{{1.0}, 1.0}, {{-1.0}, 1.0}});
    check_match(pm, recover_1d(moment_matrix(pm, 3)), 1e-10);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 1 + seed % 8;
        const auto m = random_measure({.dimension = 1, .count = n, .seed = 500 + seed});
        check_match(m, recover_1d(moment_matrix(m, static_cast<int>(n) + 1)), 1e-8);
    }
}

TEST_CASE("empty input")
{
    const auto rep = recover_atoms(moment_matrix(DiscreteMeasure(2), 3));
    CHECK(rep.atoms.empty());
    CHECK(rep.detected_rank == 0);
    CHECK(rep.residual == 0.0);
}

TEST_CASE("single atom in C^2")
{
    const DiscreteMeasure m(2, {{{1.0 + 1.0i, 2.0 - 1.0i}, 3.0}});
    const auto rep = recover_atoms(moment_matrix(m, 2));
    CHECK(rep.residual <= 1e-9);
    CHECK(rep.detected_rank == 1);
    check_match(m, rep.atoms, 1e-9);
}

TEST_CASE("cancelling fibre needs a reweighted retry")
{
    const DiscreteMeasure m(2, {{{1.0, 5.0}, 1.0}, {{2.0, 5.0}, -1.0}});
    CHECK(pushforward_drop_coord(m, 0).empty());
    const auto rep = recover_atoms(moment_matrix(m, 4));
    CHECK(rep.retries_used >= 1);
    CHECK(rep.detected_rank == 2);
    bool logged = false;
    for (const auto& line : rep.retry_log) logged |= line.find("weighted") != std::string::npos;
    CHECK(logged);
    CHECK(rep.residual <= kResidualLimit);
    check_match(m, rep.atoms, 1e-6);
}

TEST_CASE("four atoms in C^3")
{
    const auto m = random_measure({.dimension = 3, .count = 4, .seed = 2024});
    const auto rep = recover_atoms(moment_matrix(m, 5), {.seed = 7});
    CHECK(rep.atoms.size() == 4);
    CHECK(rep.detected_rank == 4);
    check_match(m, rep.atoms, 1e-6);
}

TEST_CASE("recovered count equals the rank")
{
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const std::size_t d = 2 + seed % 2;
        const std::size_t n = 1 + seed % 6;
        const auto m = random_measure({.dimension = d, .count = n, .seed = 600 + seed});
        const auto a = moment_matrix(m, static_cast<int>(n) + 1);
        const auto rep = recover_atoms(a, {.seed = seed});
        CHECK(rep.atoms.size() == numerical_rank(a).rank);
        CHECK(rep.residual <= kResidualLimit);
        check_match(m, rep.atoms, 1e-6);
    }
}

TEST_CASE("front projection matches the pushforward")
{
    const auto m = random_measure({.dimension = 3, .count = 5, .seed = 31});
    const auto a = moment_matrix(m, 6);
    const auto front = recover_atoms(submatrix_drop_first(a));
    check_match(pushforward_drop_coord(m, 0), front.atoms, 1e-6);
}

TEST_CASE("locations do not depend on g")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t d = 1 + seed % 3;
        const auto m = random_measure({.dimension = d, .count = 4, .seed = 700 + seed});
        const auto g = perturb_weight(seed, 0.1, d);
        const auto rep = recover_atoms(reweight_moments(moment_matrix(m, 6), g));
        std::vector<Atom> expected;
        for (const auto& at : m.atoms()) expected.push_back({at.location, at.weight * std::norm(g(at.location))});
        check_match(DiscreteMeasure(d, expected), rep.atoms, 1e-6);
    }
}

TEST_CASE("rotation equivariance")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t d = 2 + seed % 2;
        const auto m = random_measure({.dimension = d, .count = 4, .seed = 800 + seed});
        const auto u = random_unitary(d, 40 + seed);
        const auto rep = recover_atoms(rotate_moments(moment_matrix(m, 5), u));
        check_match(rotate_unitary(m, u), rep.atoms, 1e-6);
    }
}

TEST_CASE("reports are deterministic")
{
    const auto m = cancellation_measure(3, 12);
    const auto a = moment_matrix(m, static_cast<int>(m.size()) + 2);
    const auto r1 = io::to_json(recover_atoms(a, {.seed = 99})).dump();
    const auto r2 = io::to_json(recover_atoms(a, {.seed = 99})).dump();
    CHECK(r1 == r2);
}

TEST_CASE("refinement never increases the residual")
{
    const auto m = random_measure({.dimension = 2, .count = 3, .seed = 5});
    const auto a = moment_matrix(m, 4);
    std::vector<Atom> rough;
    for (const auto& at : m.atoms()) {
        std::vector<cplx> z = at.location.coords();
        z[0] += 1e-4;
        rough.push_back({ComplexPoint(z), at.weight * 1.001});
    }
    const DiscreteMeasure start(2, rough);
    const auto refined = refine_atoms(a, start);
    CHECK(moment_residual(a, refined, 4) <= moment_residual(a, start, 4));
    CHECK(moment_residual(a, refined, 4) <= 1e-9);
}

TEST_CASE("full-rank moments cannot be recovered")
{
    DensityMeasure disk(Polydisk::unit(1), DensitySpec::uniform());
    CHECK_THROWS_AS(recover_atoms(moment_matrix(disk, 4)), RecoveryFailed);
    DensityMeasure box(Polydisk::unit(2), DensitySpec::uniform());
    CHECK_THROWS_AS(recover_atoms(moment_matrix(box, 3)), RecoveryFailed);
}
